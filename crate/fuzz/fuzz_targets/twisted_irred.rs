#![no_main]

use grsod::homcalc::{GrContext, TwistedIrred};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(t) = s.parse::<TwistedIrred>() else { return };
    assert_eq!(t.to_string().parse::<TwistedIrred>().expect("display output parses"), t);
    let ctx = GrContext::new(2, 5).expect("valid context");
    if let Ok(n) = t.normalize(&ctx) {
        assert_eq!(n.normalize(&ctx).expect("idempotent"), n);
    }
});
