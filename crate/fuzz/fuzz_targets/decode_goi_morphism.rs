#![no_main]

use goi_core::{FdVec, Goi, RelTimes};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = Goi::new(FdVec).decode(src) {
        let g = Goi::new(FdVec);
        g.check(&m).expect("decoded morphisms are well formed");
        let _ = g.dual_morphism(&m);
    }
    let _ = Goi::new(RelTimes).decode(src);
});
