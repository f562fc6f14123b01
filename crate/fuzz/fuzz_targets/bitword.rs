#![no_main]

use grsod::grcore::{decode_binary, encode_binary, BitWord, BoxSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(w) = s.parse::<BitWord>() else { return };
    assert_eq!(w.to_string().parse::<BitWord>().expect("display output parses"), w);
    let h = w.ones();
    let bx = BoxSpec::new(w.bits().len() - h, h);
    let d = decode_binary(&w, bx).expect("any word decodes in its box");
    assert_eq!(encode_binary(&d, bx).expect("decoded diagram fits"), w);
});
