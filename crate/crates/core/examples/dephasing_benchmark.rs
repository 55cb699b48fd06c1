//! Spin-1/2 pure dephasing against its closed form, and the RK4 order.

use spinbath::prelude::*;

fn main() -> spinbath::Result<()> {
    let gamma = 1.0;
    let j = SpinQuantum::from_twice(1);
    let ens = Ensembles::single(j);
    let model = DecoherenceModel::single(DampingMatrix::diagonal(0.0, 0.0, gamma), AxisSet::Z);
    let g = build_generator(&model, &ens)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)]);
    let rho0 = density_from_pure(&plus, &ens.dims())?;
    let exact = |t: f64| (1.0 - (-gamma * t).exp()) / 2.0;

    let traj = evolve(&g, &rho0, &EvolveOptions::fixed(5.0, 1e-3).with_stride(1000))?;
    for sample in &traj.samples {
        println!("t = {:.1}  S_lin = {:.12}  exact = {:.12}", sample.t, sample.s_lin, exact(sample.t));
    }

    let mut prev: Option<f64> = None;
    for h in [0.2, 0.1, 0.05, 0.025] {
        let err = (evolve(&g, &rho0, &EvolveOptions::fixed(5.0, h))?.last().s_lin - exact(5.0)).abs();
        match prev {
            Some(p) => println!("h = {h:<6} error {err:.3e}  observed order {:.3}", (p / err).log2()),
            None => println!("h = {h:<6} error {err:.3e}"),
        }
        prev = Some(err);
    }
    Ok(())
}
