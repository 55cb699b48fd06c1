//! Paired-term approximation of the x variance next to the exact value.

use spinbath::prelude::*;

fn main() -> spinbath::Result<()> {
    let j = SpinQuantum::new(4.0)?;
    let jx = total_spin_ops(j, j)?;
    println!("{:<14} {:>10} {:>12} {:>12}", "profile", "mincond", "approx", "exact");
    for (name, profile) in [
        ("uniform", Profile::Uniform),
        ("alternating", Profile::AlternatingUniform),
        ("singlet", Profile::Singlet),
        ("gaussian w=2", Profile::Gaussian { width: 2.0 }),
        ("gaussian w=3", Profile::Gaussian { width: 3.0 }),
    ] {
        let coeffs = coefficient_profile(&profile, j, j)?;
        let spec = EntangledStateSpec::new(j, j, coeffs)?;
        let psi = entangled_state(&spec)?;
        println!(
            "{name:<14} {:>10.4} {:>12.6} {:>12.6}",
            mincond_residual(&spec),
            variance_lx_approx(&spec)?,
            variance_exact(jx.x(), &psi)?
        );
    }
    Ok(())
}
