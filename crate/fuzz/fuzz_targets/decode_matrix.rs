#![no_main]

use goi_core::LinMap;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = serde_json::from_slice::<LinMap>(data) {
        assert_eq!(f.entries().len(), f.dom_dim() * f.cod_dim());
        let again: LinMap = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(again.dom(), f.dom());
        assert_eq!(again.cod(), f.cod());
    }
});
