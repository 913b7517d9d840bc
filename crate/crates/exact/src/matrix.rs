use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};

use crate::poly::MultiPoly;
use crate::ratfun::RatFun;
use crate::rational::Rational;
use crate::ExactError;

/// Ring element usable as a matrix entry.
///
/// Polynomial rings have no arity-free zero, so constructors take a zero
/// prototype and elements produce their own units.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, other: &Self) -> Self;
    fn sub_elem(&self, other: &Self) -> Self;
    fn mul_elem(&self, other: &Self) -> Self;
    fn neg_elem(&self) -> Self;
}

macro_rules! scalar_via_ops {
    ($t:ty, $zero:expr, $one:expr, $is_zero:expr) => {
        impl Scalar for $t {
            fn zero_like(&self) -> Self {
                ($zero)(self)
            }
            fn one_like(&self) -> Self {
                ($one)(self)
            }
            fn is_zero_elem(&self) -> bool {
                ($is_zero)(self)
            }
            fn add_elem(&self, other: &Self) -> Self {
                self + other
            }
            fn sub_elem(&self, other: &Self) -> Self {
                self - other
            }
            fn mul_elem(&self, other: &Self) -> Self {
                self * other
            }
            fn neg_elem(&self) -> Self {
                -self.clone()
            }
        }
    };
}

scalar_via_ops!(Rational, |_: &Rational| Rational::zero(), |_: &Rational| Rational::one(), |x: &Rational| x.is_zero());
scalar_via_ops!(MultiPoly, |p: &MultiPoly| MultiPoly::zero(p.nvars()), |p: &MultiPoly| MultiPoly::one(p.nvars()), MultiPoly::is_zero);
scalar_via_ops!(RatFun, |p: &RatFun| RatFun::zero(p.nvars()), |p: &RatFun| RatFun::one(p.nvars()), RatFun::is_zero);

impl Scalar for i64 {
    fn zero_like(&self) -> Self {
        0
    }
    fn one_like(&self) -> Self {
        1
    }
    fn is_zero_elem(&self) -> bool {
        *self == 0
    }
    fn add_elem(&self, other: &Self) -> Self {
        self.checked_add(*other).expect("integer overflow")
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self.checked_sub(*other).expect("integer overflow")
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self.checked_mul(*other).expect("integer overflow")
    }
    fn neg_elem(&self) -> Self {
        -self
    }
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn is_zero_elem(&self) -> bool {
        *self == 0.0
    }
    fn add_elem(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    zero: T,
}

pub type QMatrix = Matrix<Rational>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, zero: T) -> Self {
        Matrix { rows, cols, data: vec![zero.clone(); rows * cols], zero }
    }

    pub fn identity(n: usize, zero: T) -> Self {
        let mut m = Self::zeros(n, n, zero);
        for i in 0..n {
            m[(i, i)] = m.zero.one_like();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, zero: T, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data, zero }
    }

    /// Rows must have equal length; `cols` is taken from `cols_hint` when there are no rows.
    pub fn from_rows(rows: Vec<Vec<T>>, cols_hint: usize, zero: T) -> Self {
        let cols = rows.first().map(Vec::len).unwrap_or(cols_hint);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let nrows = rows.len();
        Matrix { rows: nrows, cols, data: rows.into_iter().flatten().collect(), zero }
    }

    pub fn column(v: Vec<T>, zero: T) -> Self {
        let n = v.len();
        Matrix { rows: n, cols: 1, data: v, zero }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Scalar>(&self, zero: U, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), zero }
    }

    pub fn try_map<U: Scalar, E>(&self, zero: U, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<U>, E>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data, zero })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.zero.clone(), |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols, self.zero.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero_elem() {
                        continue;
                    }
                    let t = a.mul_elem(b);
                    out[(i, j)] = out[(i, j)].add_elem(&t);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, ExactError> {
        let col = Self::column(v.to_vec(), self.zero.clone());
        Ok(self.mul(&col)?.data)
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        self.zip_with(other, T::add_elem)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.zip_with(other, T::sub_elem)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self, ExactError> {
        if self.shape() != other.shape() {
            return Err(ExactError::DimensionMismatch(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
            zero: self.zero.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(self.zero.clone(), T::neg_elem)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(self.zero.clone(), |x| x.mul_elem(c))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, self.zero.clone(), |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), self.zero.clone(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn hstack(&self, other: &Self) -> Result<Self, ExactError> {
        if self.rows != other.rows {
            return Err(ExactError::DimensionMismatch("hstack row counts differ".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, self.zero.clone(), |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Self) -> Result<Self, ExactError> {
        if self.cols != other.cols {
            return Err(ExactError::DimensionMismatch("vstack column counts differ".into()));
        }
        Ok(Self::from_fn(self.rows + other.rows, self.cols, self.zero.clone(), |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero_elem)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        *x == x.one_like()
                    } else {
                        x.is_zero_elem()
                    }
                })
            })
    }

    pub fn diag(v: &[T], zero: T) -> Self {
        let n = v.len();
        Self::from_fn(n, n, zero.clone(), |i, j| if i == j { v[i].clone() } else { zero.clone() })
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(self.zero.clone(), |acc, i| acc.add_elem(&self[(i, i)]))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

// Rational-specific algorithms.
impl Matrix<Rational> {
    pub fn q_zeros(rows: usize, cols: usize) -> Self {
        Self::zeros(rows, cols, Rational::zero())
    }

    pub fn q_identity(n: usize) -> Self {
        Self::identity(n, Rational::zero())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols_hint: usize) -> Self {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect(),
            cols_hint,
            Rational::zero(),
        )
    }

    pub fn from_int_matrix(m: &Matrix<i64>) -> Self {
        m.map(Rational::zero(), |&x| Rational::from_integer(x.into()))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = &f * &m[(r, j)];
                        m[(i, j)] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one basis vector per row, in RREF-derived order.
    pub fn nullspace(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let rows: Vec<Vec<Rational>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect();
        Self::from_rows(rows, self.cols, Rational::zero())
    }

    pub fn det(&self) -> Result<Rational, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else { return Ok(Rational::zero()) };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] / &piv;
                    for j in c..m.cols {
                        let t = &f * &m[(c, j)];
                        m[(i, j)] -= t;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::q_identity(n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(ExactError::SingularMatrix);
        }
        Ok(r.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Coefficients `[1, c1, ..., cn]` of `det(lambda I - A)`, by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Vec<Rational> {
        faddeev_leverrier(self, |x, k| x / Rational::from_integer(k.into()))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.to_rows().iter().map(|r| r.iter().map(crate::rational_to_f64).collect()).collect()
    }

    /// Each row scaled to coprime integers with a positive leading nonzero entry.
    pub fn integer_rows(&self) -> Matrix<i64> {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let ints: Vec<num_bigint::BigInt> = row.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
                let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
                let lead_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
                ints.iter()
                    .map(|x| {
                        let mut y = if g.is_zero() { x.clone() } else { x / &g };
                        if lead_neg {
                            y = -y;
                        }
                        y.to_i64().expect("integer row entry fits in i64")
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows, self.cols, 0i64)
    }
}

/// Faddeev-LeVerrier over any commutative ring with exact division by integers.
pub(crate) fn faddeev_leverrier<T: Scalar>(a: &Matrix<T>, div_int: impl Fn(&T, i64) -> T) -> Vec<T> {
    let n = a.nrows();
    let zero = a.zero_elem().clone();
    let one = zero.one_like();
    let mut coeffs = vec![one.clone()];
    let mut m = Matrix::zeros(n, n, zero.clone());
    for k in 1..=n {
        let c_prev = coeffs[k - 1].clone();
        let mut next = a.mul(&m).expect("square");
        for i in 0..n {
            next[(i, i)] = next[(i, i)].add_elem(&c_prev);
        }
        m = next;
        let tr = a.mul(&m).expect("square").trace();
        coeffs.push(div_int(&tr, k as i64).neg_elem());
    }
    coeffs
}

impl Matrix<MultiPoly> {
    /// Characteristic polynomial coefficients over `Q[x]`.
    pub fn charpoly_poly(&self) -> Vec<MultiPoly> {
        faddeev_leverrier(self, |x, k| x.scale(&Rational::new(1.into(), k.into())))
    }

    pub fn eval_at(&self, point: &[Rational]) -> QMatrix {
        self.map(Rational::zero(), |p| p.eval(point))
    }
}

impl Matrix<i64> {
    pub fn int_zeros(rows: usize, cols: usize) -> Self {
        Self::zeros(rows, cols, 0)
    }

    pub fn to_q(&self) -> QMatrix {
        QMatrix::from_int_matrix(self)
    }
}
