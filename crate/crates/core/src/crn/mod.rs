//! Stoichiometry, fast/slow split, conservation laws and complex-graph invariants
//! of a mass-action network.

mod graph;

pub use graph::NetworkGraph;

use num_traits::Zero;
use tfr_exact::{Matrix, MultiPoly, Monomial, QMatrix, Rational};

use crate::model::{Complex, CrnModel, Speed};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CrnError {
    #[error("deficiency formula gave {0}: graph and stoichiometric matrix disagree")]
    NegativeDeficiency(i64),
}

/// Reactions of a network (or subnetwork) in matrix form.
#[derive(Clone, Debug)]
pub struct Network {
    /// Columns of the full network these reactions came from.
    pub columns: Vec<usize>,
    pub reactants: Vec<Complex>,
    pub products: Vec<Complex>,
    /// `n x m`, product minus reactant.
    pub stoich: Matrix<i64>,
    /// `n x m` kinetic orders (reactant vectors).
    pub y: Matrix<i64>,
    pub k: Vec<Rational>,
}

impl Network {
    fn from_columns(model: &CrnModel, columns: Vec<usize>) -> Self {
        let n = model.n();
        let m = columns.len();
        let mut stoich = Matrix::int_zeros(n, m);
        let mut y = Matrix::int_zeros(n, m);
        let mut reactants = Vec::with_capacity(m);
        let mut products = Vec::with_capacity(m);
        let mut k = Vec::with_capacity(m);
        for (j, &c) in columns.iter().enumerate() {
            let r = &model.reactions[c];
            let a = r.reactant.to_dense(n);
            let b = r.product.to_dense(n);
            for i in 0..n {
                stoich[(i, j)] = b[i] - a[i];
                y[(i, j)] = a[i];
            }
            reactants.push(r.reactant.clone());
            products.push(r.product.clone());
            k.push(r.rate.clone());
        }
        Network { columns, reactants, products, stoich, y, k }
    }

    pub fn n(&self) -> usize {
        self.stoich.nrows()
    }

    pub fn m(&self) -> usize {
        self.k.len()
    }

    pub fn rank(&self) -> usize {
        self.stoich.to_q().rank()
    }

    /// Mass-action rates `K o x^Y` as polynomials in the species.
    pub fn rate_polys(&self) -> Vec<MultiPoly> {
        let n = self.n();
        (0..self.m())
            .map(|j| {
                let exps: Vec<u32> = (0..n).map(|i| self.y[(i, j)] as u32).collect();
                MultiPoly::term(Monomial::from_exponents(&exps), self.k[j].clone())
            })
            .collect()
    }

    /// `N (K o x^Y)`.
    pub fn field(&self) -> Vec<MultiPoly> {
        let n = self.n();
        let rates = self.rate_polys();
        (0..n)
            .map(|i| {
                let mut acc = MultiPoly::zero(n);
                for (j, w) in rates.iter().enumerate() {
                    let c = self.stoich[(i, j)];
                    if c != 0 {
                        acc = &acc + &w.scale(&Rational::from_integer(c.into()));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn graph(&self, extra: &[Complex]) -> NetworkGraph {
        NetworkGraph::build(self.reactants.iter().zip(&self.products), extra)
    }
}

/// Full-network matrices, columns in file order.
#[derive(Clone, Debug)]
pub struct StoichData {
    pub species: Vec<String>,
    pub net: Network,
    pub speeds: Vec<Speed>,
}

impl StoichData {
    pub fn n(&self) -> usize {
        self.species.len()
    }
}

pub fn build_stoich(model: &CrnModel) -> StoichData {
    let net = Network::from_columns(model, (0..model.reactions.len()).collect());
    StoichData { species: model.species_names(), net, speeds: model.reactions.iter().map(|r| r.speed).collect() }
}

#[derive(Clone, Debug)]
pub struct SlowFastSplit {
    pub species: Vec<String>,
    pub fast: Network,
    pub slow: Network,
    /// Extra isolated nodes of the fast graph.
    pub fast_nodes: Vec<Complex>,
    pub r: usize,
    pub s: usize,
}

impl SlowFastSplit {
    pub fn n(&self) -> usize {
        self.species.len()
    }

    pub fn h0(&self) -> Vec<MultiPoly> {
        self.fast.field()
    }

    pub fn h1(&self) -> Vec<MultiPoly> {
        self.slow.field()
    }

    pub fn fast_graph(&self) -> NetworkGraph {
        self.fast.graph(&self.fast_nodes)
    }

    /// Canonical basis of the left kernel of `N_f`.
    pub fn l_f(&self) -> Matrix<i64> {
        left_kernel_basis(&self.fast.stoich)
    }
}

pub fn split_slow_fast(sd: &StoichData, model: &CrnModel) -> SlowFastSplit {
    let pick = |speed: Speed| -> Vec<usize> { sd.speeds.iter().enumerate().filter(|(_, s)| **s == speed).map(|(j, _)| j).collect() };
    let fast = Network::from_columns(model, pick(Speed::Fast));
    let slow = Network::from_columns(model, pick(Speed::Slow));
    let r = fast.rank();
    SlowFastSplit { species: sd.species.clone(), fast, slow, fast_nodes: model.fast_nodes.clone(), r, s: sd.n() - r }
}

/// Rows form a basis of `{ b : b A = 0 }`, in reduced echelon form scaled to
/// coprime integers with positive pivots.
pub fn left_kernel_basis(a: &Matrix<i64>) -> Matrix<i64> {
    let n = a.nrows();
    let kernel = a.to_q().transpose().nullspace();
    if kernel.nrows() == 0 {
        return Matrix::int_zeros(0, n);
    }
    let (echelon, pivots) = kernel.rref();
    let rows: Vec<usize> = (0..pivots.len()).collect();
    echelon.select_rows(&rows).integer_rows()
}

/// Linear first integrals of the full network.
pub fn conservation_laws(sd: &StoichData) -> Matrix<i64> {
    left_kernel_basis(&sd.net.stoich)
}

/// `#nodes - rank - #linkage classes`.
pub fn deficiency(g: &NetworkGraph, a: &Matrix<i64>) -> Result<usize, CrnError> {
    let d = g.num_nodes() as i64 - a.to_q().rank() as i64 - g.linkage_classes.len() as i64;
    if d < 0 {
        return Err(CrnError::NegativeDeficiency(d));
    }
    Ok(d as usize)
}

pub fn weakly_reversible(g: &NetworkGraph) -> bool {
    g.weakly_reversible()
}

/// Integer rank, used by callers that hold `Matrix<i64>`.
pub fn int_rank(a: &Matrix<i64>) -> usize {
    a.to_q().rank()
}

/// Whether `b` spans the same row space as `a` (both integer, same column count).
pub fn same_row_space(a: &Matrix<i64>, b: &Matrix<i64>) -> bool {
    let ra = int_rank(a);
    ra == int_rank(b) && ra == a.to_q().vstack(&b.to_q()).map(|m| m.rank()).unwrap_or(usize::MAX)
}

/// `B A` is zero.
pub fn annihilates(b: &Matrix<i64>, a: &Matrix<i64>) -> bool {
    let p: QMatrix = b.to_q().mul(&a.to_q()).expect("conformable");
    let zero = p.entries().all(Rational::is_zero);
    zero
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;

    fn split_of(text: &str) -> (StoichData, SlowFastSplit) {
        let m = parse_model(text).unwrap();
        let c = m.as_crn().unwrap();
        let sd = build_stoich(c);
        let sp = split_slow_fast(&sd, c);
        (sd, sp)
    }

    #[test]
    fn example_one_structure() {
        let (sd, sp) = split_of("@species X1 X2 X3\n@fast X1 + X2 <-> X3 : 1, 1\n@slow X1 + X3 <-> 2 X2 : 1, 1\n");
        assert_eq!(sp.fast.stoich.col(0), vec![-1, -1, 1]);
        assert_eq!(sp.fast.stoich.col(1), vec![1, 1, -1]);
        assert_eq!((sp.r, sp.s), (1, 2));
        let lf = sp.l_f();
        assert!(annihilates(&lf, &sp.fast.stoich));
        let oracle = Matrix::from_rows(vec![vec![1, -1, 0], vec![1, 0, 1]], 3, 0i64);
        assert!(same_row_space(&lf, &oracle));
        let g = sp.fast_graph();
        assert_eq!(deficiency(&g, &sp.fast.stoich).unwrap(), 0);
        assert!(weakly_reversible(&g));
        assert_eq!(sd.net.m(), 4);
    }

    #[test]
    fn inflow_column() {
        let (sd, _) = split_of("@species X1\n@fast 0 -> X1 : 1\n");
        assert_eq!(sd.net.stoich.col(0), vec![1]);
        assert_eq!(sd.net.y.col(0), vec![0]);
        assert_eq!(conservation_laws(&sd).nrows(), 0);
    }

    #[test]
    fn kernel_of_invertible_matrix_is_empty() {
        let a = Matrix::from_rows(vec![vec![2, 1], vec![1, 1]], 2, 0i64);
        assert_eq!(left_kernel_basis(&a).shape(), (0, 2));
    }

    #[test]
    fn all_fast_leaves_slow_field_zero() {
        let (_, sp) = split_of("@fast A <-> B : 1, 2\n");
        assert_eq!(sp.slow.m(), 0);
        assert!(sp.h1().iter().all(MultiPoly::is_zero));
    }
}
