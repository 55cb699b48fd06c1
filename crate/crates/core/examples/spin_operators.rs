//! Collective spin operators, their commutators and two-ensemble embedding.

use spinbath::prelude::*;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn main() -> spinbath::Result<()> {
    let j = SpinQuantum::new(1.5)?;
    let ops = angular_momentum_ops(j);
    println!("spin {j}: dimension {}", j.dim());

    let (x, y, z) = (ops.jx.matrix(), ops.jy.matrix(), ops.jz.matrix());
    let comm = x * y - y * x - z * C64::new(0.0, 1.0);
    println!("max |[Jx, Jy] - i Jz| = {:.1e}", max_abs(&comm));

    let casimir = ops.jsq.matrix() - CMatrix::identity(4, 4) * C64::new(j.value() * (j.value() + 1.0), 0.0);
    println!("max |J^2 - j(j+1)| = {:.1e}", max_abs(&casimir));

    // Composite coupling for two ensembles; lambda = 1 gives (J1 + J2) / 2.
    let j2 = SpinQuantum::new(1.0)?;
    for lambda in [0.0, 1.0, 2.0] {
        let l = composite_coupling_ops(j, j2, lambda)?;
        let psi = fock_product_state(j, HalfInt::from_twice(3), j2, HalfInt::from_int(-1))?;
        println!(
            "lambda = {lambda}: <L_z> on |3/2, -1> = {:+.3}",
            l.z().expectation(&psi)?.re
        );
    }
    Ok(())
}
