//! Input models: mass-action networks with fast/slow tags, or generic polynomial
//! slow-fast vector fields given through a product decomposition of the fast part.
//!
//! The text format is line oriented. `#` starts a comment.
//!
//! ```text
//! @species X1 X2 X3
//! @fast
//! X1 + X2 <-> X3 : 1, 1
//! @slow
//! X1 + X3 <-> 2 X2 : 1, 1
//! ```
//!
//! Generic systems use `@generic` with `@vars`, `@P` (one row per line,
//! comma-separated), `@mu` and `@h1` (one expression per line). Both kinds
//! accept `@params`, `@phi` (a parameterization in the parameters) and `@L`
//! (rows in the state variables). `@fastnodes` adds isolated complexes to the
//! fast graph and `@epsilon` sets the default perturbation size.

mod expr;
mod lex;
mod parse;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use tfr_exact::{rational_to_string, Rational};

pub use expr::{expr_from_poly, Expr};
pub use parse::parse_model;
pub use validate::{validate_model, Diagnostic, Severity};
pub(crate) use validate::param_names;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}: duplicate species '{name}'")]
    DuplicateSpecies { name: String, line: usize },
    #[error("line {line}, column {col}: rate constant {value} is not positive")]
    NonPositiveRate { value: String, line: usize, col: usize },
    #[error("line {line}, column {col}: unknown identifier '{name}'")]
    UnknownIdentifier { name: String, line: usize, col: usize },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("empty model")]
    Empty,
}

impl ModelError {
    pub(crate) fn syntax(line: usize, col: usize, message: impl Into<String>) -> Self {
        ModelError::Syntax { line, col, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Species {
    pub name: String,
    pub index: usize,
}

/// Nonnegative integer combination of species; the empty complex is the node `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Complex {
    coeffs: BTreeMap<usize, u32>,
}

impl Complex {
    pub fn zero() -> Self {
        Complex::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut c = Complex::zero();
        for (i, k) in pairs {
            c.add(i, k);
        }
        c
    }

    pub fn single(species: usize) -> Self {
        Self::from_pairs([(species, 1)])
    }

    pub(crate) fn add(&mut self, species: usize, k: u32) {
        if k > 0 {
            *self.coeffs.entry(species).or_insert(0) += k;
        }
    }

    pub fn coefficient(&self, species: usize) -> u32 {
        self.coeffs.get(&species).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.coeffs.iter().map(|(&i, &k)| (i, k))
    }

    pub fn to_dense(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for (i, k) in self.support() {
            v[i] = k as i64;
        }
        v
    }

    /// Keeps only the species selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Complex {
        Complex { coeffs: self.coeffs.iter().filter(|(i, _)| keep(**i)).map(|(&i, &k)| (i, k)).collect() }
    }

    pub fn display(&self, species: &[Species]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.support()
            .map(|(i, k)| if k == 1 { species[i].name.clone() } else { format!("{k} {}", species[i].name) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Speed {
    Fast,
    Slow,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reaction {
    pub reactant: Complex,
    pub product: Complex,
    pub rate: Rational,
    pub speed: Speed,
    /// Source line, 0 for programmatically built reactions.
    pub line: usize,
}

/// Parameterization data that either model kind may carry.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UserReduction {
    /// Parameter names `v1..vs`; empty means default names.
    pub params: Vec<String>,
    pub phi: Option<Vec<Expr>>,
    /// Rows over the state variables.
    pub l: Option<Vec<Vec<Expr>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrnModel {
    pub species: Vec<Species>,
    pub reactions: Vec<Reaction>,
    /// Isolated complexes registered as nodes of the fast graph.
    pub fast_nodes: Vec<Complex>,
    /// Whether `@species` was given explicitly.
    pub declared_species: bool,
}

impl CrnModel {
    pub fn n(&self) -> usize {
        self.species.len()
    }

    pub fn species_names(&self) -> Vec<String> {
        self.species.iter().map(|s| s.name.clone()).collect()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn reactions_of(&self, speed: Speed) -> impl Iterator<Item = &Reaction> {
        self.reactions.iter().filter(move |r| r.speed == speed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericModel {
    pub vars: Vec<String>,
    /// `n x r` rows.
    pub p: Vec<Vec<Expr>>,
    pub mu: Vec<Expr>,
    pub h1: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    Crn(CrnModel),
    Generic(GenericModel),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub kind: ModelKind,
    pub user: UserReduction,
    pub epsilon: Rational,
}

impl Model {
    pub fn state_names(&self) -> Vec<String> {
        match &self.kind {
            ModelKind::Crn(c) => c.species_names(),
            ModelKind::Generic(g) => g.vars.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.state_names().len()
    }

    pub fn as_crn(&self) -> Option<&CrnModel> {
        match &self.kind {
            ModelKind::Crn(c) => Some(c),
            ModelKind::Generic(_) => None,
        }
    }

    pub fn is_crn(&self) -> bool {
        self.as_crn().is_some()
    }
}

fn write_rows(f: &mut fmt::Formatter<'_>, rows: &[Vec<Expr>]) -> fmt::Result {
    for row in rows {
        let items: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        writeln!(f, "{}", items.join(", "))?;
    }
    Ok(())
}

/// Canonical text form; parsing it back gives a structurally identical model.
impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::Crn(c) => {
                writeln!(f, "@species {}", c.species_names().join(" "))?;
                for speed in [Speed::Fast, Speed::Slow] {
                    let rs: Vec<&Reaction> = c.reactions_of(speed).collect();
                    if rs.is_empty() {
                        continue;
                    }
                    writeln!(f, "{}", if speed == Speed::Fast { "@fast" } else { "@slow" })?;
                    for r in rs {
                        writeln!(
                            f,
                            "{} -> {} : {}",
                            r.reactant.display(&c.species),
                            r.product.display(&c.species),
                            rational_to_string(&r.rate)
                        )?;
                    }
                }
                if !c.fast_nodes.is_empty() {
                    let nodes: Vec<String> = c.fast_nodes.iter().map(|x| x.display(&c.species).replace(' ', "")).collect();
                    writeln!(f, "@fastnodes {}", nodes.join(" "))?;
                }
            }
            ModelKind::Generic(g) => {
                writeln!(f, "@generic")?;
                writeln!(f, "@vars {}", g.vars.join(" "))?;
                writeln!(f, "@P")?;
                write_rows(f, &g.p)?;
                writeln!(f, "@mu")?;
                for e in &g.mu {
                    writeln!(f, "{e}")?;
                }
                writeln!(f, "@h1")?;
                for e in &g.h1 {
                    writeln!(f, "{e}")?;
                }
            }
        }
        if !self.user.params.is_empty() {
            writeln!(f, "@params {}", self.user.params.join(" "))?;
        }
        if let Some(phi) = &self.user.phi {
            writeln!(f, "@phi")?;
            for e in phi {
                writeln!(f, "{e}")?;
            }
        }
        if let Some(l) = &self.user.l {
            writeln!(f, "@L")?;
            write_rows(f, l)?;
        }
        writeln!(f, "@epsilon {}", rational_to_string(&self.epsilon))
    }
}
