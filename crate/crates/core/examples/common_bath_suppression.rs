//! In a common bath the singlet loses purity at a rate proportional to (lambda - 1)^2.

use spinbath::prelude::*;

fn main() -> spinbath::Result<()> {
    let j = SpinQuantum::new(2.0)?;
    let ens = Ensembles::pair(j, j);
    let coeffs = coefficient_profile(&Profile::Singlet, j, j)?;
    let psi = entangled_state(&EntangledStateSpec::new(j, j, coeffs)?)?;
    let gamma = DampingMatrix::diagonal(1.0, 1.0, 1.0);

    println!("{:>6} {:>14} {:>14}", "lambda", "rate", "rate/(l-1)^2");
    for k in 0..=8 {
        let lambda = 0.25 * k as f64;
        let model = DecoherenceModel::common(gamma, lambda, AxisSet::XYZ);
        let rate = rate_report(&psi, &model, &ens)?.analytic_rate;
        let scaled = if lambda == 1.0 { f64::NAN } else { rate / (lambda - 1.0).powi(2) };
        println!("{lambda:>6.2} {rate:>14.6e} {scaled:>14.6}");
    }
    Ok(())
}
