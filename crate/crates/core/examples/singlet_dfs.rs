//! Certifies the singlet as decoherence-free and evolves it to check.

use spinbath::prelude::*;

fn main() -> spinbath::Result<()> {
    let j = SpinQuantum::new(2.0)?;
    let ens = Ensembles::pair(j, j);
    let gamma = DampingMatrix::new([[1.0, 0.3, 0.0], [0.3, 0.7, 0.0], [0.0, 0.0, 1.5]]);
    let g = build_generator(&DecoherenceModel::common(gamma, 1.0, AxisSet::XYZ), &ens)?;

    for level in CoupledLevel::all(j, j).into_iter().filter(|l| l.m == HalfInt::ZERO) {
        let psi = coupled_basis_state(j, j, level)?;
        let cert = certify_state(&g, &psi)?;
        println!(
            "|L={}, M=0>: residual {:.2e}, dS/dt {:+.3e}, decoherence-free: {}",
            level.l, cert.residual, cert.purity_rate, cert.certified
        );
    }

    let singlet = coupled_basis_state(j, j, CoupledLevel::new(HalfInt::ZERO, HalfInt::ZERO)?)?;
    let rho = density_from_pure(&singlet, &ens.dims())?;
    let traj = evolve(&g, &rho, &EvolveOptions::default_fixed(10.0).with_stride(1000))?;
    println!("singlet fidelity after t = 10: {:.15}", traj.last().rho.fidelity_with(&singlet)?);

    let z_only = build_generator(
        &DecoherenceModel::common(DampingMatrix::diagonal(0.0, 0.0, 1.0), 1.0, AxisSet::Z),
        &ens,
    )?;
    let fock: Vec<StateVector> = j
        .m_values()
        .map(|m| fock_product_state(j, m, j, -m))
        .collect::<spinbath::Result<_>>()?;
    let sub = certify_subspace(&z_only, &fock)?;
    println!(
        "span of |m, -m> under z coupling: dimension {}, max residual {:.1e}, certified {}",
        sub.dimension, sub.max_residual, sub.certified
    );
    Ok(())
}
