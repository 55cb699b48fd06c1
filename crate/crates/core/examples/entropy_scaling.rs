//! Purity-loss rate of uniform states in independent baths grows like Ñ(Ñ+1).

use spinbath::prelude::*;

fn main() -> spinbath::Result<()> {
    let (g1, g2) = (1.0, 0.5);
    let model = DecoherenceModel::independent(
        DampingMatrix::diagonal(0.0, 0.0, g1),
        DampingMatrix::diagonal(0.0, 0.0, g2),
        AxisSet::Z,
    );
    println!("{:>3} {:>12} {:>12} {:>12} {:>8}", "N~", "numeric", "analytic", "N~^2 est.", "ratio");
    for n in 1..=8u32 {
        let j = SpinQuantum::from_twice(2 * n);
        let coeffs = coefficient_profile(&Profile::Uniform, j, j)?;
        let psi = entangled_state(&EntangledStateSpec::new(j, j, coeffs)?)?;
        let r = rate_report(&psi, &model, &Ensembles::pair(j, j))?;
        let est = r.estimate_rate.unwrap_or(f64::NAN);
        println!(
            "{n:>3} {:>12.6} {:>12.6} {:>12.6} {:>8.4}",
            r.numeric_rate,
            r.analytic_rate,
            est,
            r.analytic_rate / est
        );
    }
    Ok(())
}
