//! Reference implementations used only by the integration tests. None of
//! them call into the library's operator or generator code.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinbath::prelude::*;

pub type Mat = DMatrix<C64>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `[Jx, Jy, Jz]` for spin `twice_j / 2`, basis ordered `m = j, j-1, ..., -j`,
/// filled element by element from the ladder matrix elements.
pub fn spin_matrices(twice_j: u32) -> [Mat; 3] {
    let j = twice_j as f64 / 2.0;
    let d = twice_j as usize + 1;
    let mut jx = Mat::zeros(d, d);
    let mut jy = Mat::zeros(d, d);
    let mut jz = Mat::zeros(d, d);
    for r in 0..d {
        let m = j - r as f64;
        jz[(r, r)] = c(m);
        if r + 1 < d {
            // <m | J+ | m-1>
            let mlow = m - 1.0;
            let amp = (j * (j + 1.0) - mlow * (mlow + 1.0)).sqrt();
            jx[(r, r + 1)] = c(amp / 2.0);
            jx[(r + 1, r)] = c(amp / 2.0);
            jy[(r, r + 1)] = C64::new(0.0, -amp / 2.0);
            jy[(r + 1, r)] = C64::new(0.0, amp / 2.0);
        }
    }
    [jx, jy, jz]
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    Mat::from_fn(ra * rb, ca * cb, |i, k| a[(i / rb, k / cb)] * b[(i % rb, k % cb)])
}

/// `[J1, J2]` embedded in the product space, each as `[x, y, z]`.
pub fn pair_matrices(tj1: u32, tj2: u32) -> ([Mat; 3], [Mat; 3]) {
    let a = spin_matrices(tj1);
    let b = spin_matrices(tj2);
    let i1 = Mat::identity(tj1 as usize + 1, tj1 as usize + 1);
    let i2 = Mat::identity(tj2 as usize + 1, tj2 as usize + 1);
    (
        [kron(&a[0], &i2), kron(&a[1], &i2), kron(&a[2], &i2)],
        [kron(&i1, &b[0]), kron(&i1, &b[1]), kron(&i1, &b[2])],
    )
}

pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

/// `-i[H, rho] + sum_ab g_ab (O_a rho O_b - (O_b O_a rho + rho O_b O_a) / 2)`
/// summed over every ordered axis pair, without diagonalizing `g`.
pub fn dissipator_double_sum(gamma: &[[f64; 3]; 3], ops: &[Mat; 3], h: Option<&Mat>, rho: &Mat) -> Mat {
    let mut out = Mat::zeros(rho.nrows(), rho.ncols());
    if let Some(h) = h {
        out -= (h * rho - rho * h) * C64::new(0.0, 1.0);
    }
    for a in 0..3 {
        for b in 0..3 {
            let g = gamma[a][b];
            if g == 0.0 {
                continue;
            }
            let ba = &ops[b] * &ops[a];
            out += (&ops[a] * rho * &ops[b] - (&ba * rho + rho * &ba) * c(0.5)) * c(g);
        }
    }
    out
}

/// `<psi|O^2|psi> - <psi|O|psi>^2` by explicit index sums.
pub fn variance_brute(op: &Mat, psi: &DVector<C64>) -> f64 {
    let n = psi.len();
    let mut first = C64::new(0.0, 0.0);
    let mut second = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            first += psi[i].conj() * op[(i, k)] * psi[k];
            for l in 0..n {
                second += psi[i].conj() * op[(i, k)] * op[(k, l)] * psi[l];
            }
        }
    }
    second.re - first.re * first.re
}

/// `S_lin(t)` of `|+x>` under pure dephasing `gamma J_z`: `(1 - e^{-gamma t}) / 2`.
pub fn dephasing_slin(gamma: f64, t: f64) -> f64 {
    (1.0 - (-gamma * t).exp()) / 2.0
}

/// `|L, M>` in the product basis: the top state of each `L` is the
/// `L(L+1)` eigenvector of `J^2` within the `M = L` sector, phased so its
/// `m1 = j1` component is positive, then lowered with `J-`.
pub fn coupled_state_by_lowering(tj1: u32, tj2: u32, twice_l: i32, twice_m: i32) -> DVector<C64> {
    let (a, b) = pair_matrices(tj1, tj2);
    let tot: Vec<Mat> = (0..3).map(|k| &a[k] + &b[k]).collect();
    let jsq = &tot[0] * &tot[0] + &tot[1] * &tot[1] + &tot[2] * &tot[2];
    let jminus = &tot[0] - &tot[1] * C64::new(0.0, 1.0);
    let d2 = tj2 as usize + 1;
    let twice_m_of = |idx: usize| -> i32 {
        let (i1, i2) = (idx / d2, idx % d2);
        (tj1 as i32 - 2 * i1 as i32) + (tj2 as i32 - 2 * i2 as i32)
    };
    let sector: Vec<usize> = (0..jsq.nrows()).filter(|&i| twice_m_of(i) == twice_l).collect();
    let sub = DMatrix::<f64>::from_fn(sector.len(), sector.len(), |r, k| jsq[(sector[r], sector[k])].re);
    let eig = SymmetricEigen::new(sub);
    let l = twice_l as f64 / 2.0;
    let target = l * (l + 1.0);
    let col = (0..sector.len())
        .min_by(|&x, &y| {
            (eig.eigenvalues[x] - target)
                .abs()
                .total_cmp(&(eig.eigenvalues[y] - target).abs())
        })
        .unwrap();
    let mut top = DVector::<C64>::zeros(jsq.nrows());
    for (r, &i) in sector.iter().enumerate() {
        top[i] = c(eig.eigenvectors[(r, col)]);
    }
    // Condon-Shortley: <j1, j1; j2, L - j1 | L, L> > 0.
    let lead = sector.iter().position(|&i| i / d2 == 0).unwrap();
    if top[sector[lead]].re < 0.0 {
        top = -top;
    }
    let mut v = top;
    let mut tm = twice_l;
    while tm > twice_m {
        v = &jminus * v;
        v /= c(v.norm());
        tm -= 2;
    }
    v
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    let v = StateVector::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = v.norm();
    v / c(n)
}

/// Random positive semidefinite damping matrix restricted to `axes`.
pub fn random_damping(rng: &mut ChaCha8Rng, axes: AxisSet) -> DampingMatrix {
    let mut b = [[0.0; 3]; 3];
    for row in b.iter_mut() {
        for x in row.iter_mut() {
            *x = rng.random_range(-1.0..1.0);
        }
    }
    let mut g = [[0.0; 3]; 3];
    for p in 0..3 {
        for q in 0..3 {
            let on = |i: usize| axes.contains(Axis::from_index(i).unwrap());
            if on(p) && on(q) {
                g[p][q] = (0..3).map(|k| b[p][k] * b[q][k]).sum();
            }
        }
    }
    DampingMatrix::new(g)
}

pub fn random_axes(rng: &mut ChaCha8Rng) -> AxisSet {
    [AxisSet::Z, AxisSet::XZ, AxisSet::XYZ, AxisSet::X][rng.random_range(0..4)]
}

pub fn to_mat(op: &SpinOperator) -> Mat {
    op.matrix().clone()
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}
