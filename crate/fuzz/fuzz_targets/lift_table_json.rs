#![no_main]

use jacobi_forms::hecke::LiftTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(t) = LiftTable::from_json(src) {
        let back = LiftTable::from_json(&t.to_json()).expect("encoded table decodes");
        assert_eq!(back, t);
    }
});
