//! Square complex matrix storage backing [`FockOperator`](super::FockOperator).
//!
//! Polynomials in ladder operators are banded and stay in compressed-row
//! form; exponentials and their products are dense. Every operation picks
//! the cheapest kernel for the storage pair it receives and densifies a
//! sparse result once it passes a quarter fill.

use num_traits::Zero;

use crate::scalar::{Real, C};

const DENSIFY_FILL: f64 = 0.25;

#[derive(Debug, Clone)]
pub(crate) struct Csr<T> {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<C<T>>,
}

#[derive(Debug, Clone)]
pub(crate) struct Dense<T> {
    pub n: usize,
    /// Row-major entries.
    pub data: Vec<C<T>>,
}

#[derive(Debug, Clone)]
pub(crate) enum Storage<T> {
    Sparse(Csr<T>),
    Dense(Dense<T>),
}

impl<T: Real> Csr<T> {
    pub fn zeros(n: usize) -> Self {
        Csr {
            n,
            indptr: vec![0; n + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Csr {
            n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![C::new(T::one(), T::zero()); n],
        }
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(n: usize, mut trip: Vec<(usize, usize, C<T>)>) -> Self {
        trip.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(trip.len());
        let mut values: Vec<C<T>> = Vec::with_capacity(trip.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(trip.len());
        for (i, j, v) in trip {
            assert!(i < n && j < n, "triplet ({i}, {j}) outside {n}x{n}");
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(j);
                values.push(v);
                rows.push(i);
                last = Some((i, j));
            }
        }
        let mut keep_idx = Vec::with_capacity(indices.len());
        let mut keep_val = Vec::with_capacity(values.len());
        for ((i, j), v) in rows.into_iter().zip(indices).zip(values) {
            if !v.is_zero() {
                indptr[i + 1] += 1;
                keep_idx.push(j);
                keep_val.push(v);
            }
        }
        for i in 0..n {
            indptr[i + 1] += indptr[i];
        }
        Csr {
            n,
            indptr,
            indices: keep_idx,
            values: keep_val,
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[C<T>]) {
        let (s, e) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[s..e], &self.values[s..e])
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => C::zero(),
        }
    }

    pub fn to_dense(&self) -> Dense<T> {
        let mut d = Dense::zeros(self.n);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                d.data[i * self.n + j] = v;
            }
        }
        d
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        let values: Vec<_> = self.values.iter().map(|&v| f(v)).collect();
        Csr::from_parts_filtered(self.n, &self.indptr, &self.indices, values)
    }

    fn from_parts_filtered(n: usize, indptr: &[usize], indices: &[usize], values: Vec<C<T>>) -> Self {
        let mut out_ptr = vec![0usize; n + 1];
        let mut out_idx = Vec::with_capacity(values.len());
        let mut out_val = Vec::with_capacity(values.len());
        for i in 0..n {
            for p in indptr[i]..indptr[i + 1] {
                if !values[p].is_zero() {
                    out_idx.push(indices[p]);
                    out_val.push(values[p]);
                }
            }
            out_ptr[i + 1] = out_idx.len();
        }
        Csr {
            n,
            indptr: out_ptr,
            indices: out_idx,
            values: out_val,
        }
    }

    /// `alpha * self + beta * other`.
    pub fn axpby(&self, alpha: C<T>, other: &Csr<T>, beta: C<T>) -> Csr<T> {
        let n = self.n;
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..n {
            let (ca, va) = self.row(i);
            let (cb, vb) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ca.len() || q < cb.len() {
                let (j, v) = if q >= cb.len() || (p < ca.len() && ca[p] < cb[q]) {
                    p += 1;
                    (ca[p - 1], alpha * va[p - 1])
                } else if p >= ca.len() || cb[q] < ca[p] {
                    q += 1;
                    (cb[q - 1], beta * vb[q - 1])
                } else {
                    p += 1;
                    q += 1;
                    (ca[p - 1], alpha * va[p - 1] + beta * vb[q - 1])
                };
                if !v.is_zero() {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr[i + 1] = indices.len();
        }
        Csr {
            n,
            indptr,
            indices,
            values,
        }
    }

    /// Gustavson row-by-row product.
    pub fn matmul(&self, other: &Csr<T>) -> Csr<T> {
        let n = self.n;
        let mut acc = vec![C::<T>::zero(); n];
        let mut mark = vec![usize::MAX; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for i in 0..n {
            touched.clear();
            let (ca, va) = self.row(i);
            for (&k, &a) in ca.iter().zip(va) {
                let (cb, vb) = other.row(k);
                for (&j, &b) in cb.iter().zip(vb) {
                    if mark[j] != i {
                        mark[j] = i;
                        acc[j] = C::zero();
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                if !acc[j].is_zero() {
                    indices.push(j);
                    values.push(acc[j]);
                }
            }
            indptr[i + 1] = indices.len();
        }
        Csr {
            n,
            indptr,
            indices,
            values,
        }
    }

    pub fn adjoint(&self) -> Csr<T> {
        let n = self.n;
        let mut trip = Vec::with_capacity(self.nnz());
        for i in 0..n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                trip.push((j, i, v.conj()));
            }
        }
        Csr::from_triplets(n, trip)
    }

    pub fn matvec(&self, x: &[C<T>], y: &mut [C<T>]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            let mut s = C::zero();
            for (&j, &v) in cols.iter().zip(vals) {
                s += v * x[j];
            }
            *yi = s;
        }
    }

    pub fn kron(a: &Csr<T>, b: &Csr<T>) -> Csr<T> {
        let (na, nb) = (a.n, b.n);
        let mut trip = Vec::with_capacity(a.nnz() * b.nnz());
        for i1 in 0..na {
            let (c1, v1) = a.row(i1);
            for i2 in 0..nb {
                let (c2, v2) = b.row(i2);
                for (&j1, &x) in c1.iter().zip(v1) {
                    for (&j2, &y) in c2.iter().zip(v2) {
                        trip.push((i1 * nb + i2, j1 * nb + j2, x * y));
                    }
                }
            }
        }
        Csr::from_triplets(na * nb, trip)
    }

    pub fn fill(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.nnz() as f64 / (self.n as f64 * self.n as f64)
        }
    }
}

impl<T: Real> Dense<T> {
    pub fn zeros(n: usize) -> Self {
        Dense {
            n,
            data: vec![C::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::zeros(n);
        for i in 0..n {
            d.data[i * n + i] = C::new(T::one(), T::zero());
        }
        d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Dense {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn axpby(&self, alpha: C<T>, other: &Dense<T>, beta: C<T>) -> Dense<T> {
        Dense {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| alpha * a + beta * b)
                .collect(),
        }
    }

    pub fn add_sparse(&self, alpha: C<T>, other: &Csr<T>, beta: C<T>) -> Dense<T> {
        let mut out = self.map(|v| alpha * v);
        for i in 0..self.n {
            let (cols, vals) = other.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                out.data[i * self.n + j] += beta * v;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Dense<T>) -> Dense<T> {
        let n = self.n;
        let mut out = Dense::zeros(n);
        T::gemm(n, n, n, &self.data, &other.data, &mut out.data);
        out
    }

    /// `self * sparse`.
    pub fn matmul_sparse(&self, other: &Csr<T>) -> Dense<T> {
        let n = self.n;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            let row = self.row(i);
            let dst = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (cols, vals) = other.row(k);
                for (&j, &b) in cols.iter().zip(vals) {
                    dst[j] += a * b;
                }
            }
        }
        out
    }

    /// `sparse * self`.
    pub fn sparse_matmul(sparse: &Csr<T>, dense: &Dense<T>) -> Dense<T> {
        let n = dense.n;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            let (cols, vals) = sparse.row(i);
            let dst = &mut out.data[i * n..(i + 1) * n];
            for (&k, &a) in cols.iter().zip(vals) {
                for (d, &b) in dst.iter_mut().zip(dense.row(k)) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Dense<T> {
        let n = self.n;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn matvec(&self, x: &[C<T>], y: &mut [C<T>]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = C::zero();
            for (&a, &b) in self.row(i).iter().zip(x) {
                s += a * b;
            }
            *yi = s;
        }
    }

    pub fn kron(a: &Dense<T>, b: &Dense<T>) -> Dense<T> {
        let (na, nb) = (a.n, b.n);
        let n = na * nb;
        let mut out = Dense::zeros(n);
        for i1 in 0..na {
            for j1 in 0..na {
                let x = a.get(i1, j1);
                if x.is_zero() {
                    continue;
                }
                for i2 in 0..nb {
                    let dst = (i1 * nb + i2) * n + j1 * nb;
                    for j2 in 0..nb {
                        out.data[dst + j2] = x * b.get(i2, j2);
                    }
                }
            }
        }
        out
    }

    /// Solve `self * X = rhs` by Gaussian elimination with partial pivoting.
    /// Returns `None` if a pivot vanishes.
    pub fn solve(&self, rhs: &Dense<T>) -> Option<Dense<T>> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut b = rhs.data.clone();
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].norm();
            for r in col + 1..n {
                let v = a[r * n + col].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == T::zero() || !best.is_finite() {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                    b.swap(col * n + j, piv * n + j);
                }
            }
            let inv = C::new(T::one(), T::zero()) / a[col * n + col];
            let (head, tail) = a.split_at_mut((col + 1) * n);
            let prow = &head[col * n..];
            let (bhead, btail) = b.split_at_mut((col + 1) * n);
            let brow = &bhead[col * n..];
            for (r, (arow, brow_r)) in tail.chunks_mut(n).zip(btail.chunks_mut(n)).enumerate() {
                let _ = r;
                let factor = arow[col] * inv;
                if factor.is_zero() {
                    continue;
                }
                for (x, &p) in arow[col..].iter_mut().zip(&prow[col..]) {
                    *x -= factor * p;
                }
                for (x, &p) in brow_r.iter_mut().zip(brow) {
                    *x -= factor * p;
                }
            }
        }
        // back substitution, row operations on the right-hand side
        for col in (0..n).rev() {
            let inv = C::new(T::one(), T::zero()) / a[col * n + col];
            for x in &mut b[col * n..(col + 1) * n] {
                *x *= inv;
            }
            let (bhead, btail) = b.split_at_mut(col * n);
            let src = &btail[..n];
            for r in 0..col {
                let factor = a[r * n + col];
                if factor.is_zero() {
                    continue;
                }
                for (x, &s) in bhead[r * n..(r + 1) * n].iter_mut().zip(src) {
                    *x -= factor * s;
                }
            }
        }
        Some(Dense { n, data: b })
    }
}

impl<T: Real> Storage<T> {
    pub fn n(&self) -> usize {
        match self {
            Storage::Sparse(s) => s.n,
            Storage::Dense(d) => d.n,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        match self {
            Storage::Sparse(s) => s.get(i, j),
            Storage::Dense(d) => d.get(i, j),
        }
    }

    pub fn to_dense(&self) -> Dense<T> {
        match self {
            Storage::Sparse(s) => s.to_dense(),
            Storage::Dense(d) => d.clone(),
        }
    }

    /// Densify a sparse matrix once it is too full to pay for the indices.
    pub fn normalized(self) -> Self {
        match self {
            Storage::Sparse(s) if s.fill() > DENSIFY_FILL => Storage::Dense(s.to_dense()),
            other => other,
        }
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        match self {
            Storage::Sparse(s) => Storage::Sparse(s.map(f)),
            Storage::Dense(d) => Storage::Dense(d.map(f)),
        }
    }

    pub fn axpby(&self, alpha: C<T>, other: &Storage<T>, beta: C<T>) -> Self {
        match (self, other) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a.axpby(alpha, b, beta)).normalized(),
            (Storage::Dense(a), Storage::Dense(b)) => Storage::Dense(a.axpby(alpha, b, beta)),
            (Storage::Dense(a), Storage::Sparse(b)) => Storage::Dense(a.add_sparse(alpha, b, beta)),
            (Storage::Sparse(a), Storage::Dense(b)) => Storage::Dense(b.add_sparse(beta, a, alpha)),
        }
    }

    pub fn matmul(&self, other: &Storage<T>) -> Self {
        match (self, other) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a.matmul(b)).normalized(),
            (Storage::Dense(a), Storage::Dense(b)) => Storage::Dense(a.matmul(b)),
            (Storage::Dense(a), Storage::Sparse(b)) => Storage::Dense(a.matmul_sparse(b)),
            (Storage::Sparse(a), Storage::Dense(b)) => Storage::Dense(Dense::sparse_matmul(a, b)),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Storage::Sparse(s) => Storage::Sparse(s.adjoint()),
            Storage::Dense(d) => Storage::Dense(d.adjoint()),
        }
    }

    pub fn matvec(&self, x: &[C<T>], y: &mut [C<T>]) {
        match self {
            Storage::Sparse(s) => s.matvec(x, y),
            Storage::Dense(d) => d.matvec(x, y),
        }
    }

    /// Visit every stored entry (all entries for dense storage).
    pub fn for_each_entry(&self, mut f: impl FnMut(usize, usize, C<T>)) {
        match self {
            Storage::Sparse(s) => {
                for i in 0..s.n {
                    let (cols, vals) = s.row(i);
                    for (&j, &v) in cols.iter().zip(vals) {
                        f(i, j, v);
                    }
                }
            }
            Storage::Dense(d) => {
                for i in 0..d.n {
                    for (j, &v) in d.row(i).iter().enumerate() {
                        f(i, j, v);
                    }
                }
            }
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, Storage::Dense(_))
    }
}
