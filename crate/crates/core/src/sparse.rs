use crate::{CMatrix, C64};

/// Compressed-row copy of an operator, used on the generator hot path.
#[derive(Clone, Debug)]
pub(crate) struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl Csr {
    pub(crate) fn from_dense(m: &CMatrix) -> Self {
        let n = m.nrows();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in 0..n {
            for c in 0..m.ncols() {
                let v = m[(r, c)];
                if v.re != 0.0 || v.im != 0.0 {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self { n, row_ptr, cols, vals }
    }

    /// `self * b`.
    pub(crate) fn mul_dense(&self, b: &CMatrix) -> CMatrix {
        debug_assert_eq!(b.nrows(), self.n);
        let mut out = CMatrix::zeros(self.n, b.ncols());
        for k in 0..b.ncols() {
            let src = b.column(k);
            let mut dst = out.column_mut(k);
            for r in 0..self.n {
                let mut acc = C64::new(0.0, 0.0);
                for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                    acc += self.vals[idx] * src[self.cols[idx]];
                }
                dst[r] = acc;
            }
        }
        out
    }
}
