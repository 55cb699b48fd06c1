//! Clebsch-Gordan coefficients and the coupled basis |L, M> of two spins.

use spinbath::prelude::*;

fn main() -> spinbath::Result<()> {
    let j = SpinQuantum::new(1.0)?;
    println!("<1 m1; 1 m2 | L M> for M = 0");
    for l in 0..=2 {
        let level = CoupledLevel::new(HalfInt::from_int(l), HalfInt::ZERO)?;
        let row: Vec<String> = j
            .m_values()
            .map(|m1| format!("{:+.6}", clebsch_gordan(j, m1, j, -m1, level).unwrap()))
            .collect();
        println!("  L = {l}: {}", row.join("  "));
    }

    let basis: Vec<StateVector> = CoupledLevel::all(j, j)
        .into_iter()
        .map(|lv| coupled_basis_state(j, j, lv))
        .collect::<spinbath::Result<_>>()?;
    let mut worst = 0.0f64;
    for (p, u) in basis.iter().enumerate() {
        for (q, v) in basis.iter().enumerate() {
            let want = if p == q { 1.0 } else { 0.0 };
            worst = worst.max((u.dotc(v).re - want).abs());
        }
    }
    println!("{} coupled states, orthonormal to {worst:.1e}", basis.len());
    Ok(())
}
