use mzisim_core::dynamics::*;
use mzisim_core::fock::FockSpace;
use mzisim_core::params::SystemParams;
use std::time::Instant;

fn main() {
    let p = SystemParams::<f64>::default();
    for n_max in [4usize, 5] {
        let s = FockSpace::new(n_max).unwrap();
        let t0 = Instant::now();
        let l = build_liouvillian(s, &p).unwrap();
        let t_build = t0.elapsed();
        let t0 = Instant::now();
        let (_rho, diag) = steady_state(&l).unwrap();
        let t_solve = t0.elapsed();
        println!(
            "n_max={n_max}: build {:?}, solve {:?}, residual {:.2e}, boundary {:.2e}",
            t_build, t_solve, diag.residual, diag.boundary_population
        );
        if n_max == 5 {
            let t0 = Instant::now();
            let _p5 = Propagator::new(&l, 0.05).unwrap();
            println!("n_max=5 propagator (expm): {:?}", t0.elapsed());
        }
    }
}
