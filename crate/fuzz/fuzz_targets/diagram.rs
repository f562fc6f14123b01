#![no_main]

use grsod::grcore::{encode_binary, decode_binary, BoxSpec, Diagram};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(d) = s.parse::<Diagram>() else { return };
    let again: Diagram = d.to_string().parse().expect("display output parses");
    assert_eq!(again, d);
    if d.is_partition() && d.first() <= 16 && d.len() <= 16 {
        let bx = BoxSpec::new(d.first() as usize, d.len());
        let w = encode_binary(&d, bx).expect("fits its own box");
        assert_eq!(decode_binary(&w, bx).expect("valid word"), d);
    }
});
