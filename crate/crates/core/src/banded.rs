//! Band storage and direct solvers: general banded LU with partial pivoting
//! and a pivot-free tridiagonal sweep.

/// Square band matrix with `lower` sub- and `upper` super-diagonals.
///
/// Rows are stored densely over `lower + upper + 1` columns; row `i` holds
/// columns `i - lower ..= i + upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    dim: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(dim: usize, lower: usize, upper: usize) -> Self {
        Self { dim, lower, upper, data: vec![0.0; dim * (lower + upper + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.dim && j < self.dim && j + self.lower >= i && j <= i + self.upper
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(self.in_band(i, j), "({i}, {j}) outside band");
        i * self.width() + (j + self.lower - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            0.0
        }
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band ({}, {})", self.lower, self.upper);
        let k = self.slot(i, j);
        self.data[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band ({}, {})", self.lower, self.upper);
        let k = self.slot(i, j);
        self.data[k] = v;
    }

    /// Columns of row `i` that lie in the band.
    pub fn row_range(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.lower)..=(i + self.upper).min(self.dim - 1)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim).map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Number of nonzero diagonals actually occupied, `(lower, upper)`.
    pub fn occupied_bandwidth(&self) -> (usize, usize) {
        let (mut lo, mut up) = (0, 0);
        for i in 0..self.dim {
            for j in self.row_range(i) {
                if self.get(i, j) != 0.0 {
                    if j < i {
                        lo = lo.max(i - j);
                    } else {
                        up = up.max(j - i);
                    }
                }
            }
        }
        (lo, up)
    }
}

/// Zero (or vanishing) pivot met in column `column`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularPivot {
    pub column: usize,
}

/// Banded LU factors `P A = L U`; `U` has bandwidth `lower + upper`.
#[derive(Debug, Clone)]
pub struct BandLu {
    dim: usize,
    lower: usize,
    width: usize,
    upper_fill: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandLu {
    pub fn factor(a: &BandMatrix) -> Result<Self, SingularPivot> {
        let n = a.dim;
        let kl = a.lower;
        let ku_fill = a.upper + a.lower;
        let width = kl + ku_fill + 1;
        let mut lu =
            Self { dim: n, lower: kl, width, upper_fill: ku_fill, data: vec![0.0; n * width], pivots: vec![0; n] };
        for i in 0..n {
            for j in a.row_range(i) {
                let k = lu.slot(i, j);
                lu.data[k] = a.get(i, j);
            }
        }
        let tiny = a.max_abs() * f64::EPSILON * 16.0;

        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + ku_fill).min(n - 1);
            let mut piv = k;
            let mut best = lu.data[lu.slot(k, k)].abs();
            for r in k + 1..=last_row {
                let v = lu.data[lu.slot(r, k)].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if !(best > tiny) || !best.is_finite() {
                return Err(SingularPivot { column: k });
            }
            lu.pivots[k] = piv;
            if piv != k {
                for j in k..=last_col {
                    let (x, y) = (lu.slot(k, j), lu.slot(piv, j));
                    lu.data.swap(x, y);
                }
            }
            let pivot = lu.data[lu.slot(k, k)];
            for r in k + 1..=last_row {
                let rk = lu.slot(r, k);
                let l = lu.data[rk] / pivot;
                lu.data[rk] = l;
                if l != 0.0 {
                    for j in k + 1..=last_col {
                        let kj = lu.data[lu.slot(k, j)];
                        let rj = lu.slot(r, j);
                        lu.data[rj] -= l * kj;
                    }
                }
            }
        }
        Ok(lu)
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.lower - i)
    }

    /// Solves in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.dim;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let piv = self.pivots[k];
            if piv != k {
                b.swap(k, piv);
            }
            let bk = b[k];
            for r in k + 1..=(k + self.lower).min(n - 1) {
                b[r] -= self.data[self.slot(r, k)] * bk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = b[k];
            for j in k + 1..=(k + self.upper_fill).min(n - 1) {
                acc -= self.data[self.slot(k, j)] * b[j];
            }
            b[k] = acc / self.data[self.slot(k, k)];
        }
    }
}

/// Thomas sweep for `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
/// `sub[0]` and `sup[n-1]` are ignored. Returns the row of a zero pivot.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) -> Result<(), usize> {
    let n = diag.len();
    assert!(sub.len() == n && sup.len() == n && rhs.len() == n);
    if n == 0 {
        return Ok(());
    }
    let mut c = vec![0.0; n];
    let mut denom = diag[0];
    if denom == 0.0 || !denom.is_finite() {
        return Err(0);
    }
    c[0] = sup[0] / denom;
    rhs[0] /= denom;
    for i in 1..n {
        denom = diag[i] - sub[i] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(i);
        }
        c[i] = sup[i] / denom;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Ok(())
}
