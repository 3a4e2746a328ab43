#![no_main]

use aifv_core::{analysis, codec, goldens, BitSeq};
use libfuzzer_sys::fuzz_target;

// Byte 0 picks a built-in code-tuple, byte 1 the start table and lookahead,
// and every later byte contributes one bit.
fuzz_target!(|data: &[u8]| {
    let [pick, setup, rest @ ..] = data else {
        return;
    };
    let name = goldens::NAMES[usize::from(*pick) % goldens::NAMES.len()];
    let f = goldens::tuple(name);
    let start = usize::from(setup & 0x0f) % f.num_tables();
    let k = usize::from(setup >> 4) % 4;
    let bits = BitSeq::from_bits(rest.iter().take(256).map(|b| b & 1 == 1));
    let Ok(out) = codec::decode(&f, start, &bits, k) else {
        return;
    };
    if analysis::is_k_bit_delay_decodable(&f, k).decodable() {
        assert_eq!(out.conflicts, 0);
        assert!(out.max_delay() <= k);
        let again = codec::encode(&f, start, &out.symbols).unwrap();
        assert!(again.concat(&out.tail.window) == bits);
    }
});
