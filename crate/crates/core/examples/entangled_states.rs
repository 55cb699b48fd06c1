//! States sum_m c_m |m, -m> and their Schmidt data.

use spinbath::prelude::*;

fn main() -> spinbath::Result<()> {
    let j = SpinQuantum::new(3.0)?;
    let dims = [j.dim(), j.dim()];
    let profiles = [
        ("uniform", Profile::Uniform),
        ("alternating", Profile::AlternatingUniform),
        ("singlet", Profile::Singlet),
        ("gaussian w=1", Profile::Gaussian { width: 1.0 }),
    ];
    println!("{:<14} {:>8} {:>10} {:>10}", "profile", "schmidt", "E", "ln(2j+1)");
    for (name, profile) in profiles {
        let coeffs = coefficient_profile(&profile, j, j)?;
        let psi = entangled_state(&EntangledStateSpec::new(j, j, coeffs)?)?;
        println!(
            "{name:<14} {:>8} {:>10.6} {:>10.6}",
            schmidt_number(&psi, &dims)?,
            entanglement_entropy(&psi, &dims)?,
            (2.0 * j.value() + 1.0).ln()
        );
    }

    let rho = density_from_pure(&fock_product_state(j, HalfInt::from_int(1), j, HalfInt::from_int(-1))?, &dims)?;
    println!("product state reduced purity: {:.3}", rho.partial_trace(0)?.purity());
    Ok(())
}
