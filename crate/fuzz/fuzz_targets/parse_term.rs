#![no_main]

use goi_core::mll::{parse, parse_type, typecheck};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = parse(src) {
        let printed = t.to_string();
        assert_eq!(parse(&printed).expect("printed term parses"), t, "{printed}");
        let _ = typecheck(&t, &[]);
    }
    if let Ok(ty) = parse_type(src) {
        assert_eq!(parse_type(&ty.to_string()).expect("printed type parses"), ty);
    }
});
