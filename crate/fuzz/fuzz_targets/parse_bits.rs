#![no_main]

use aifv_core::BitSeq;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(b) = text.parse::<BitSeq>() {
        assert_eq!(b.to_string().parse::<BitSeq>().unwrap(), b);
    }
});
