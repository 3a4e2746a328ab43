#![no_main]

use aifv_core::search;
use aifv_core::SourceDist;
use libfuzzer_sys::fuzz_target;
use num_traits::One;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(mu) = SourceDist::parse(text) else {
        return;
    };
    let total: num_rational::BigRational = mu.probs().iter().sum();
    assert!(total.is_one());
    if mu.len() <= 64 {
        let (lengths, _) = search::huffman_length(&mu);
        assert_eq!(lengths.len(), mu.len());
    }
});
