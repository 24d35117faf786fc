#![no_main]

use jacobi_forms::arith::int;
use jacobi_forms::codec::LatticeJson;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(j) = serde_json::from_slice::<LatticeJson>(data) else { return };
    if let Ok(l) = j.into_lattice() {
        if l.rank() <= 4 && l.det() <= int(1000) {
            let _ = l.discriminant_group();
        }
        let again = LatticeJson::from_lattice(&l).into_lattice().expect("encoded lattice decodes");
        assert_eq!(again.gram_l(), l.gram_l());
    }
});
