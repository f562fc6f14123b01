#![no_main]

use grsod::homcalc::GrContext;
use grsod::pathblocks::{parse_path, parse_points};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.is_empty() {
        return;
    }
    let (k, n) = (1 + (data[0] % 4) as i64, 2 + (data[0] / 4 % 6) as i64);
    let Ok(ctx) = GrContext::new(k.min(n - 1), n) else { return };
    let Ok(s) = std::str::from_utf8(&data[1..]) else { return };
    let _ = parse_points(s);
    if let Ok(p) = parse_path(&ctx, s) {
        assert_eq!(parse_path(&ctx, &p.to_string()).expect("display output parses"), p);
    }
});
