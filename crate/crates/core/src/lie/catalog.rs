use std::fmt;
use std::str::FromStr;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Automorphism, AutomorphismKind, LieAlgebra, SubalgebraChain};
use crate::linalg::block_diag;
use crate::{CMatrix, Element};

pub const MAX_RANK_N: usize = 8;
pub const MAX_COPIES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    /// `sl(n, ℝ)`
    Sl,
    /// `su(n)`
    Su,
    /// `sl(m, ℝ)^{⊕N}` with the cyclic automorphism.
    SlProduct,
}

/// Catalog entry selector, e.g. `{"family": "sl", "n": 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDescriptor {
    pub family: FamilyName,
    /// Matrix size of one simple factor.
    pub n: usize,
    /// Number of identical factors; only used by `sl-product`.
    #[serde(default = "one")]
    pub copies: usize,
    #[serde(default)]
    pub automorphism: AutomorphismKind,
}

fn one() -> usize {
    1
}

impl AlgebraDescriptor {
    pub fn sl(n: usize) -> Self {
        AlgebraDescriptor {
            family: FamilyName::Sl,
            n,
            copies: 1,
            automorphism: AutomorphismKind::Identity,
        }
    }

    pub fn su(n: usize) -> Self {
        AlgebraDescriptor {
            family: FamilyName::Su,
            ..Self::sl(n)
        }
    }

    pub fn sl_product(m: usize, copies: usize) -> Self {
        AlgebraDescriptor {
            family: FamilyName::SlProduct,
            n: m,
            copies,
            automorphism: AutomorphismKind::Cyclic,
        }
    }

    /// Dimension of the algebra the descriptor names, without building it.
    pub fn dim(&self) -> usize {
        let simple = self.n * self.n - 1;
        match self.family {
            FamilyName::SlProduct => self.copies * simple,
            _ => simple,
        }
    }

    /// Rank of `K`.
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// Order of the Weyl group acting on `K`, `n!`.
    pub fn weyl_order(&self) -> usize {
        (1..=self.n).product()
    }

    pub fn label(&self) -> String {
        match self.family {
            FamilyName::Sl => format!("sl({})", self.n),
            FamilyName::Su => format!("su({})", self.n),
            FamilyName::SlProduct => format!("sl({})^{}", self.n, self.copies),
        }
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Accepts `sl3`, `su4`, `sl2x3`.
impl FromStr for AlgebraDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::Unsupported(format!("cannot parse algebra name '{s}'"));
        let (family, rest) = if let Some(r) = s.strip_prefix("sl") {
            (FamilyName::Sl, r)
        } else if let Some(r) = s.strip_prefix("su") {
            (FamilyName::Su, r)
        } else {
            return Err(bad());
        };
        match rest.split_once('x') {
            Some((m, copies)) if family == FamilyName::Sl => Ok(AlgebraDescriptor::sl_product(
                m.parse().map_err(|_| bad())?,
                copies.parse().map_err(|_| bad())?,
            )),
            Some(_) => Err(bad()),
            None => {
                let n = rest.parse().map_err(|_| bad())?;
                Ok(match family {
                    FamilyName::Sl => AlgebraDescriptor::sl(n),
                    _ => AlgebraDescriptor::su(n),
                })
            }
        }
    }
}

/// A catalog algebra together with its subalgebra chain and automorphisms.
#[derive(Debug, Clone)]
pub struct Instance {
    pub descriptor: AlgebraDescriptor,
    pub algebra: LieAlgebra,
    pub chain: SubalgebraChain,
    pub automorphisms: Vec<Automorphism>,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn rank(&self) -> usize {
        self.chain.k().len()
    }

    pub fn automorphism(&self, kind: AutomorphismKind) -> Option<&Automorphism> {
        self.automorphisms.iter().find(|a| a.kind() == kind)
    }

    /// The automorphism named by the descriptor.
    pub fn default_automorphism(&self) -> &Automorphism {
        self.automorphism(self.descriptor.automorphism)
            .expect("descriptor automorphism is always built")
    }

    /// Diagonal entries of the first block of a Cartan element; imaginary
    /// parts for compact forms.
    pub fn cartan_diagonal(&self, q: &Element) -> Vec<f64> {
        let m = self.algebra.matrix_of(q);
        (0..self.algebra.block_size())
            .map(|i| {
                if self.algebra.is_compact() {
                    m[(i, i)].im
                } else {
                    m[(i, i)].re
                }
            })
            .collect()
    }

    /// Inverse of [`Instance::cartan_diagonal`] for traceless diagonals.
    pub fn cartan_from_diagonal(&self, diag: &[f64]) -> Element {
        let mut q = Element::zeros(self.dim());
        let mut acc = 0.0;
        for (i, d) in diag.iter().take(self.rank()).enumerate() {
            acc += d;
            q[i] = acc;
        }
        q
    }

    /// Root values `d_i − d_j` (i < j) of a Cartan element.
    pub fn root_values(&self, q: &Element) -> Vec<f64> {
        let d = self.cartan_diagonal(q);
        let mut out = Vec::new();
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                out.push(d[i] - d[j]);
            }
        }
        out
    }
}

fn unit_matrix(n: usize, i: usize, j: usize, value: Complex<f64>) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = value;
    m
}

/// Basis of `sl(n)` or `su(n)`: Cartan elements first, then root-type vectors.
fn simple_basis(n: usize, compact: bool) -> (Vec<CMatrix>, usize) {
    let one = Complex::new(1.0, 0.0);
    let i_unit = Complex::new(0.0, 1.0);
    let scale = if compact { i_unit } else { one };
    let mut basis = Vec::new();
    for i in 0..n - 1 {
        basis.push(unit_matrix(n, i, i, scale) - unit_matrix(n, i + 1, i + 1, scale));
    }
    let rank = basis.len();
    if compact {
        for i in 0..n {
            for j in i + 1..n {
                basis.push(unit_matrix(n, i, j, one) - unit_matrix(n, j, i, one));
                basis.push(unit_matrix(n, i, j, i_unit) + unit_matrix(n, j, i, i_unit));
            }
        }
    } else {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    basis.push(unit_matrix(n, i, j, one));
                }
            }
        }
    }
    (basis, rank)
}

/// Builds a catalog algebra, its chain `K ⊂ F ⊆ g` and its automorphisms.
pub fn build_algebra(desc: &AlgebraDescriptor) -> Result<Instance> {
    if !(2..=MAX_RANK_N).contains(&desc.n) {
        return Err(Error::OutOfRange {
            what: "n",
            value: desc.n,
            range: "2..=8",
        });
    }
    let inst = match desc.family {
        FamilyName::Sl | FamilyName::Su => {
            if desc.automorphism != AutomorphismKind::Identity {
                return Err(Error::Unsupported(format!(
                    "{} supports only the identity automorphism",
                    desc.label()
                )));
            }
            let compact = desc.family == FamilyName::Su;
            let (basis, rank) = simple_basis(desc.n, compact);
            let dim = basis.len();
            let algebra = LieAlgebra::from_basis(desc.label(), desc.n, 1, compact, basis)?;
            Instance {
                descriptor: AlgebraDescriptor { copies: 1, ..*desc },
                algebra,
                chain: SubalgebraChain::new(dim, rank, dim),
                automorphisms: vec![Automorphism::identity(dim)],
            }
        }
        FamilyName::SlProduct => {
            if !(2..=MAX_COPIES).contains(&desc.copies) {
                return Err(Error::OutOfRange {
                    what: "copies",
                    value: desc.copies,
                    range: "2..=4",
                });
            }
            if desc.automorphism != AutomorphismKind::Cyclic {
                return Err(Error::Unsupported(
                    "product algebras need the cyclic automorphism: the diagonal Cartan is not a Cartan subalgebra of g".into(),
                ));
            }
            build_product(desc)?
        }
    };
    Ok(inst)
}

fn build_product(desc: &AlgebraDescriptor) -> Result<Instance> {
    let (m, copies) = (desc.n, desc.copies);
    let (simple, rank) = simple_basis(m, false);
    let size = m * copies;
    let zero = CMatrix::zeros(m, m);
    let blocks = |parts: &[&CMatrix]| {
        let mut out = CMatrix::zeros(size, size);
        for (c, p) in parts.iter().enumerate() {
            out.view_mut((c * m, c * m), (m, m)).copy_from(*p);
        }
        out
    };
    // Diagonal copies span F = g^θ, ordered Cartan then roots like the factor.
    let mut basis: Vec<CMatrix> = simple.iter().map(|t| block_diag(t, copies)).collect();
    let f_dim = basis.len();
    // F⊥ = {(Y_1..Y_N) : ΣY_j = 0}
    for t in &simple {
        let neg = -t;
        for j in 0..copies - 1 {
            let mut parts = vec![&zero; copies];
            parts[j] = t;
            parts[copies - 1] = &neg;
            basis.push(blocks(&parts));
        }
    }
    let dim = basis.len();
    let algebra = LieAlgebra::from_basis(desc.label(), m, copies, false, basis)?;

    // θ(X)_{j+1} = X_j
    let mut shift = CMatrix::zeros(size, size);
    for c in 0..copies {
        let to = (c + 1) % copies;
        for i in 0..m {
            shift[(to * m + i, c * m + i)] = Complex::new(1.0, 0.0);
        }
    }
    let theta = algebra.conjugation_operator(&shift, &shift.transpose());
    let cyclic = Automorphism::from_matrix(AutomorphismKind::Cyclic, theta)
        .ok_or_else(|| Error::InvalidArgument("cyclic automorphism is singular".into()))?;
    Ok(Instance {
        descriptor: *desc,
        algebra,
        chain: SubalgebraChain::new(dim, rank, f_dim),
        automorphisms: vec![Automorphism::identity(dim), cyclic],
    })
}
