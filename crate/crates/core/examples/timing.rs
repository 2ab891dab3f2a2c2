use std::time::Instant;
use d8tower::{forms, trunc_through_order};

fn main() {
    let t4 = trunc_through_order(4);
    let start = Instant::now();
    let phi = forms::phi_0_1_d8(t4);
    println!("phi01-d8 @ q^4: {:?}  (levels: {})", start.elapsed(), phi.nlevels());
    let start = Instant::now();
    let psi = forms::psi_0_1_d8(t4);
    println!("psi01-d8 @ q^4: {:?}  (levels: {})", start.elapsed(), psi.nlevels());
    let q0 = phi.coefficient_q(0).unwrap();
    println!("phi01 q0 = {}", q0);
    let q0 = psi.coefficient_q(0).unwrap();
    println!("psi01 q0 terms = {} const = {}", q0.nterms(), q0.constant_term());
    let start = Instant::now();
    let fam = forms::phi_index2_family(8, trunc_through_order(3)).unwrap();
    println!("index2 family D8 @ q^3: {:?} (k=0 levels {})", start.elapsed(), fam[0].nlevels());
}
