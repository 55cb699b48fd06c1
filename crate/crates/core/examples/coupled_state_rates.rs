//! Rates of |L, 0> in a balanced common bath against (gamma_xx + gamma_yy) L(L+1).

use spinbath::prelude::*;

fn main() -> spinbath::Result<()> {
    let j = SpinQuantum::new(2.0)?;
    let ens = Ensembles::pair(j, j);
    let gamma = DampingMatrix::diagonal(0.6, 0.3, 1.0);
    let model = DecoherenceModel::common(gamma, 1.0, AxisSet::XYZ)
        .with_normalization(CouplingNormalization::TotalSpin);

    println!("{:>3} {:>12} {:>12}", "L", "computed", "closed form");
    for level in CoupledLevel::all(j, j).into_iter().filter(|l| l.m == HalfInt::ZERO) {
        let psi = coupled_basis_state(j, j, level)?;
        let report = rate_report(&psi, &model, &ens)?;
        println!(
            "{:>3} {:>12.8} {:>12.8}",
            level.l,
            report.analytic_rate,
            coupled_state_rate(level, AxisSet::XYZ, &gamma)?
        );
    }
    Ok(())
}
