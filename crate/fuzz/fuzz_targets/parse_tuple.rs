#![no_main]

use aifv_core::classes;
use aifv_core::CodeTuple;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(f) = CodeTuple::parse(text) else {
        return;
    };
    assert_eq!(CodeTuple::parse(&f.serialize()).unwrap(), f);
    // Keep the analysis cheap enough for the fuzzer's time budget.
    if f.num_tables() <= 4 && f.sigma() <= 4 && f.max_codeword_len() <= 8 {
        let report = classes::classify_tuple(&f);
        assert!(classes::verify_hierarchy(&[report]));
    }
});
