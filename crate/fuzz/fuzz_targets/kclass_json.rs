#![no_main]

use grsod::homcalc::GrContext;
use grsod::kclass::EqKClass;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let ctx = GrContext::new(2, 4).expect("valid context");
    if let Ok(c) = EqKClass::from_json(ctx, s) {
        let out = c.to_json().to_string();
        assert_eq!(EqKClass::from_json(ctx, &out).expect("own output parses"), c);
    }
});

