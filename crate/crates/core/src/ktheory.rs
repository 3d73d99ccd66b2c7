//! K-groups of rotation Cuntz-Krieger algebras and inductive-limit data for
//! their gauge-fixed cores.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::LabeledGraph;
use crate::linalg::{cokernel, kernel_rank, AbelianGroupPresentation, IntMatrix};

pub const AF_DEPTH_CAP: usize = 12;
pub const BUNCE_DEDDENS_DEPTH_CAP: usize = 30;

pub const TAG_ROTATION_CK: &str = "K_i = coker(1 - A_G) + ker(1 - A_G), i = 0, 1";
pub const TAG_FULLSHIFT: &str = "full N-shift: K_0 = K_1 = Z/(N-1)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("depth {requested} exceeds cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("need N >= 2, got {0}")]
    TooFewSymbols(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KGroups {
    pub k0: AbelianGroupPresentation,
    pub k1: AbelianGroupPresentation,
    pub theorem: String,
}

/// `I - A_G` for the adjacency matrix of `g`.
pub fn one_minus_adjacency(g: &LabeledGraph) -> IntMatrix {
    let m = g.symbol_matrices();
    let n = g.vertex_count();
    IntMatrix::from_fn(n, n, |i, j| {
        let delta = BigInt::from(u32::from(i == j));
        delta - BigInt::from(m.adjacency(i, j))
    })
}

pub fn adjacency(g: &LabeledGraph) -> IntMatrix {
    let m = g.symbol_matrices();
    let n = g.vertex_count();
    IntMatrix::from_fn(n, n, |i, j| BigInt::from(m.adjacency(i, j)))
}

pub fn k_rotation_ck(g: &LabeledGraph) -> KGroups {
    let m = one_minus_adjacency(g);
    let group = cokernel(&m).direct_sum(&AbelianGroupPresentation::free(kernel_rank(&m)));
    KGroups {
        k0: group.clone(),
        k1: group,
        theorem: TAG_ROTATION_CK.to_string(),
    }
}

pub fn k_fullshift_crossed(n: usize) -> Result<KGroups, KError> {
    if n < 2 {
        return Err(KError::TooFewSymbols(n));
    }
    let group = AbelianGroupPresentation::cyclic(BigInt::from(n - 1));
    Ok(KGroups {
        k0: group.clone(),
        k1: group,
        theorem: TAG_FULLSHIFT.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelGroups {
    pub k0: AbelianGroupPresentation,
    pub k1: AbelianGroupPresentation,
}

/// A sequence of groups with connecting maps `level l -> level l + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductiveKData {
    pub levels: Vec<LevelGroups>,
    pub k0_maps: Vec<IntMatrix>,
    pub k1_maps: Vec<IntMatrix>,
    pub k0_limit: Option<String>,
    pub k1_limit: Option<String>,
    pub note: String,
}

impl InductiveKData {
    /// Composite K0 map from level `from` to level `to`.
    pub fn k0_composite(&self, from: usize, to: usize) -> IntMatrix {
        compose(&self.k0_maps[from..to], self.levels[from].k0.free_rank())
    }

    pub fn k1_composite(&self, from: usize, to: usize) -> IntMatrix {
        compose(&self.k1_maps[from..to], self.levels[from].k1.free_rank())
    }
}

fn compose(maps: &[IntMatrix], dim: usize) -> IntMatrix {
    maps.iter()
        .fold(IntMatrix::identity(dim), |acc, m| m * &acc)
}

/// Level data for the gauge-fixed core: each level is a direct sum of
/// circle algebras, one block per vertex, so `K0 = K1 = Z^{N0}`; the block
/// multiplicities of the embedding are the entries of `A_G`, giving
/// connecting map `A_G^T` on both groups.
pub fn af_core_dimension_data(g: &LabeledGraph, depth: usize) -> Result<InductiveKData, KError> {
    if depth > AF_DEPTH_CAP {
        return Err(KError::CapExceeded {
            requested: depth,
            cap: AF_DEPTH_CAP,
        });
    }
    let n = g.vertex_count();
    let at = adjacency(g).transpose();
    let level = LevelGroups {
        k0: AbelianGroupPresentation::free(n),
        k1: AbelianGroupPresentation::free(n),
    };
    Ok(InductiveKData {
        levels: vec![level; depth + 1],
        k0_maps: vec![at.clone(); depth],
        k1_maps: vec![at; depth],
        k0_limit: None,
        k1_limit: None,
        note: "block multiplicities A_G^T on K0 and K1; no limit recognition".to_string(),
    })
}

/// The Bunce-Deddens chain of type `N^inf`: `K0` along `x N`, `K1` along
/// identities, with limits `Z[1/N]` and `Z`.
pub fn bunce_deddens_invariant(n: u32, depth: usize) -> Result<InductiveKData, KError> {
    if n < 2 {
        return Err(KError::TooFewSymbols(n as usize));
    }
    if depth > BUNCE_DEDDENS_DEPTH_CAP {
        return Err(KError::CapExceeded {
            requested: depth,
            cap: BUNCE_DEDDENS_DEPTH_CAP,
        });
    }
    let level = LevelGroups {
        k0: AbelianGroupPresentation::free(1),
        k1: AbelianGroupPresentation::free(1),
    };
    Ok(InductiveKData {
        levels: vec![level; depth + 1],
        k0_maps: vec![IntMatrix::from_rows(&[vec![n]]); depth],
        k1_maps: vec![IntMatrix::identity(1); depth],
        k0_limit: Some(format!("Z[1/{n}]")),
        k1_limit: Some("Z".to_string()),
        note: "Bunce-Deddens algebra of type N^inf; order unit 1 at level 0".to_string(),
    })
}

/// An element `value` at level `level` of `Z --xN--> Z --xN--> ...`,
/// identified with `value / N^level` in `Z[1/N]`.
#[derive(Debug, Clone)]
pub struct ColimitElement {
    base: BigInt,
    value: BigInt,
    level: u32,
}

impl ColimitElement {
    pub fn new(base: u32, value: impl Into<BigInt>, level: u32) -> Self {
        assert!(base >= 2, "base must be at least 2");
        Self {
            base: BigInt::from(base),
            value: value.into(),
            level,
        }
    }

    /// The order unit: `1` at level 0.
    pub fn unit(base: u32) -> Self {
        Self::new(base, 1, 0)
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Image under the connecting map to the next level.
    pub fn push_forward(&self) -> Self {
        Self {
            base: self.base.clone(),
            value: &self.value * &self.base,
            level: self.level + 1,
        }
    }

    /// `a / N^m` with `m` minimal.
    pub fn normal_form(&self) -> Self {
        let mut out = self.clone();
        while out.level > 0 && !out.value.is_zero() && out.value.is_multiple_of(&out.base) {
            out.value /= &out.base;
            out.level -= 1;
        }
        if out.value.is_zero() {
            out.level = 0;
        }
        out
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            self.value.clone(),
            num_traits::pow(self.base.clone(), self.level as usize),
        )
    }

    fn at_level(&self, level: u32) -> BigInt {
        assert!(level >= self.level);
        &self.value * num_traits::pow(self.base.clone(), (level - self.level) as usize)
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.value.is_negative()
    }
}

impl PartialEq for ColimitElement {
    fn eq(&self, other: &Self) -> bool {
        assert_eq!(self.base, other.base, "elements of different colimits");
        let level = self.level.max(other.level);
        self.at_level(level) == other.at_level(level)
    }
}

impl Eq for ColimitElement {}

impl PartialOrd for ColimitElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ColimitElement {
    fn cmp(&self, other: &Self) -> Ordering {
        let level = self.level.max(other.level);
        self.at_level(level).cmp(&other.at_level(level))
    }
}

impl std::ops::Add for &ColimitElement {
    type Output = ColimitElement;

    fn add(self, rhs: &ColimitElement) -> ColimitElement {
        assert_eq!(self.base, rhs.base, "elements of different colimits");
        let level = self.level.max(rhs.level);
        ColimitElement {
            base: self.base.clone(),
            value: self.at_level(level) + rhs.at_level(level),
            level,
        }
    }
}

impl fmt::Display for ColimitElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nf = self.normal_form();
        if nf.level == 0 {
            write!(f, "{}", nf.value)
        } else if nf.level == 1 {
            write!(f, "{}/{}", nf.value, nf.base)
        } else {
            write!(f, "{}/{}^{}", nf.value, nf.base, nf.level)
        }
    }
}

impl ColimitElement {
    pub fn is_order_unit_image(&self) -> bool {
        self.to_rational().is_one()
    }
}
