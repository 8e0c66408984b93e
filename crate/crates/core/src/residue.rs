//! Inclusion and residue maps between a χ-algebra and its minors, iterated
//! residues, flags of ordered independent sets, diagonal bases and the
//! expansion of elements in them.

use serde::{Deserialize, Serialize};

use num_traits::{One, Zero};

use crate::algebra::{dimension, reduce_to_nbc, AlgebraElement};
use crate::chi::ChiMap;
use crate::error::{Error, Result};
use crate::linalg::{self, Scalar};
use crate::matroid::Matroid;
use crate::set::{ElementSet, OrderedTuple};

/// `i_x: A(M \ x) → A(M)`, the identity on supports followed by
/// straightening in `M`. When `x` is the largest element the straightening
/// does nothing, since NBC sets of `M \ x` are NBC in `M`.
pub fn inclusion(chi: &ChiMap, x: usize, a: &AlgebraElement) -> Result<AlgebraElement> {
    if let Some(support) = a.supports().find(|s| s.contains(x)) {
        return Err(Error::SupportContainsElement {
            support,
            element: x,
        });
    }
    Ok(reduce_to_nbc(chi, a))
}

/// `p_x: A(M) → A(M / x)`:
///
/// * `e_I ↦ e_{I \ x}` when `x ∈ I`;
/// * `e_I ↦ χ(I \ y * x) / χ(I \ y * y) · e_{I \ y}` when `y ∈ I` is parallel to `x`;
/// * `e_I ↦ 0` otherwise.
///
/// Returns the χ map of `M / x` together with the image. Terms with
/// dependent support are zero in `A(M)` and are dropped.
pub fn residue_step(
    chi: &ChiMap,
    x: usize,
    a: &AlgebraElement,
) -> Result<(ChiMap, AlgebraElement)> {
    let contracted = chi.contract(x)?;
    Ok((contracted, residue_image(chi, x, a)))
}

/// The image part of [`residue_step`], for callers that already hold `M / x`.
pub fn residue_image(chi: &ChiMap, x: usize, a: &AlgebraElement) -> AlgebraElement {
    let m = chi.matroid();
    let mut out = AlgebraElement::zero();
    for (i, c) in a.iter() {
        if !m.independent(i) {
            continue;
        }
        if i.contains(x) {
            out.add_term(i.without(x), c.clone());
        } else if let Some(y) = m.parallel_partner(i, x) {
            let rest = OrderedTuple::sorted(i.without(y));
            let num = chi.eval(&rest.push(x).expect("x not in I"));
            let den = chi.eval(&rest.push(y).expect("y removed"));
            out.add_term(i.without(y), c * num / den);
        }
    }
    out
}

/// The minors `M, M / i_ℓ, M / i_ℓ / i_{ℓ-1}, …` met by `p_{I^σ}`, so that
/// one ordering can be applied to many elements.
#[derive(Clone, Debug)]
pub struct ResidueChain {
    order: OrderedTuple,
    /// `chis[k]` is the map before contracting the `k`-th element from the end.
    chis: Vec<ChiMap>,
}

impl ResidueChain {
    pub fn new(chi: &ChiMap, order: &OrderedTuple) -> Result<Self> {
        if !chi.matroid().is_independent(order.support())? {
            return Err(Error::Dependent(order.support()));
        }
        let mut chis = Vec::with_capacity(order.len());
        let mut cur = chi.clone();
        for &x in order.entries().iter().rev() {
            let next = cur.contract(x)?;
            chis.push(cur);
            cur = next;
        }
        Ok(ResidueChain {
            order: order.clone(),
            chis,
        })
    }

    pub fn order(&self) -> &OrderedTuple {
        &self.order
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<Scalar> {
        a.check_degree(self.order.len())?;
        let mut cur = a.clone();
        for (chi, &x) in self.chis.iter().zip(self.order.entries().iter().rev()) {
            cur = residue_image(chi, x, &cur);
            if cur.is_zero() {
                return Ok(Scalar::zero());
            }
        }
        Ok(cur.coefficient(ElementSet::EMPTY))
    }
}

/// `p_{I^σ} = p_{σ(1)} ∘ ⋯ ∘ p_{σ(ℓ)}` applied to `a`: the last entry of
/// `order` acts first, contracting the matroid and χ at every step. Returns
/// the coefficient of the empty monomial.
pub fn iterated_residue(chi: &ChiMap, order: &OrderedTuple, a: &AlgebraElement) -> Result<Scalar> {
    ResidueChain::new(chi, order)?.apply(a)
}

/// `cl(i_ℓ) ⊊ cl({i_ℓ, i_{ℓ-1}}) ⊊ ⋯ ⊊ cl(I)` for `order = (i_1, …, i_ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagChain {
    flats: Vec<ElementSet>,
}

impl FlagChain {
    pub fn flats(&self) -> &[ElementSet] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }
}

pub fn flag_of(m: &Matroid, order: &OrderedTuple) -> Result<FlagChain> {
    if !m.is_independent(order.support())? {
        return Err(Error::Dependent(order.support()));
    }
    let mut acc = ElementSet::EMPTY;
    let flats = order
        .entries()
        .iter()
        .rev()
        .map(|&e| {
            acc.insert(e);
            m.cl(acc)
        })
        .collect();
    Ok(FlagChain { flats })
}

/// The ordering `J^τ` of `j` whose flag is `flag`, if one exists.
///
/// Built greedily from the smallest flat up. At each step at most one unused
/// element can extend the chosen elements to the next flat: two such
/// elements would make `j` dependent.
pub fn match_flag(m: &Matroid, j: ElementSet, flag: &FlagChain) -> Option<OrderedTuple> {
    if j.len() != flag.len() || !m.independent(j) {
        return None;
    }
    let mut chosen = ElementSet::EMPTY;
    let mut picked = Vec::with_capacity(j.len());
    for &flat in &flag.flats {
        let mut candidates = j
            .difference(chosen)
            .iter()
            .filter(|&e| m.cl(chosen.with(e)) == flat);
        let e = candidates.next()?;
        assert!(
            candidates.next().is_none(),
            "two extensions of {chosen} to {flat} inside the independent set {j}"
        );
        chosen.insert(e);
        picked.push(e);
    }
    picked.reverse();
    Some(OrderedTuple::new(picked).expect("distinct elements"))
}

/// A family of ordered independent sets `I^{σ_I}` of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalBasisCandidate {
    pub level: usize,
    pub elements: Vec<OrderedTuple>,
}

impl DiagonalBasisCandidate {
    pub fn new(level: usize, elements: Vec<OrderedTuple>) -> Self {
        DiagonalBasisCandidate { level, elements }
    }

    /// NBC sets with increasing orders.
    pub fn nbc(m: &Matroid, level: usize) -> Self {
        DiagonalBasisCandidate {
            level,
            elements: m
                .nbc_sets(level)
                .into_iter()
                .map(OrderedTuple::sorted)
                .collect(),
        }
    }

    pub fn to_file(&self) -> BasisFile {
        BasisFile {
            level: self.level,
            elements: self
                .elements
                .iter()
                .map(|t| BasisEntry {
                    order: t.entries().to_vec(),
                })
                .collect(),
        }
    }
}

/// `{"level": 3, "elements": [{"order": [1,5,2]}, ...]}`; each order is the
/// tuple `I^{σ_I}` and its support is the set `I`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisFile {
    pub level: usize,
    pub elements: Vec<BasisEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisEntry {
    pub order: Vec<usize>,
}

impl BasisFile {
    pub fn into_candidate(self) -> Result<DiagonalBasisCandidate> {
        let mut elements = Vec::with_capacity(self.elements.len());
        for (k, e) in self.elements.into_iter().enumerate() {
            let t = OrderedTuple::new(e.order).map_err(|err| Error::Parse {
                context: format!("elements[{k}].order"),
                message: err.to_string(),
            })?;
            elements.push(t);
        }
        Ok(DiagonalBasisCandidate::new(self.level, elements))
    }
}

pub fn parse_basis(text: &str) -> Result<DiagonalBasisCandidate> {
    let file: BasisFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    file.into_candidate()
}

/// Why a candidate fails to be a diagonal basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagonalFailure {
    WrongLength(OrderedTuple),
    Dependent(OrderedTuple),
    RepeatedSet(ElementSet),
    TooFew {
        found: usize,
        dimension: usize,
    },
    FlagCollision {
        order: OrderedTuple,
        other: ElementSet,
    },
}

impl std::fmt::Display for DiagonalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiagonalFailure::WrongLength(t) => write!(f, "{t} does not have the basis level"),
            DiagonalFailure::Dependent(t) => write!(f, "{t} is dependent"),
            DiagonalFailure::RepeatedSet(s) => write!(f, "{s} appears more than once"),
            DiagonalFailure::TooFew { found, dimension } => {
                write!(f, "{found} elements but the dimension is {dimension}")
            }
            DiagonalFailure::FlagCollision { order, other } => {
                write!(f, "an ordering of {other} has the same flag as {order}")
            }
        }
    }
}

/// Checks the three conditions: explicit orders on independent sets of the
/// right size, at least `dim A_ℓ` members, and no ordering of another member
/// reproduces the flag of a member.
pub fn check_diagonal_basis(
    m: &Matroid,
    cand: &DiagonalBasisCandidate,
) -> std::result::Result<(), DiagonalFailure> {
    let mut seen = std::collections::BTreeSet::new();
    for t in &cand.elements {
        if t.len() != cand.level {
            return Err(DiagonalFailure::WrongLength(t.clone()));
        }
        if !m.independent(t.support()) {
            return Err(DiagonalFailure::Dependent(t.clone()));
        }
        if !seen.insert(t.support()) {
            return Err(DiagonalFailure::RepeatedSet(t.support()));
        }
    }
    let dim = dimension(m, cand.level);
    if cand.elements.len() < dim {
        return Err(DiagonalFailure::TooFew {
            found: cand.elements.len(),
            dimension: dim,
        });
    }
    for t in &cand.elements {
        let flag = flag_of(m, t).expect("independent");
        for other in &cand.elements {
            if other.support() != t.support() && match_flag(m, other.support(), &flag).is_some() {
                return Err(DiagonalFailure::FlagCollision {
                    order: t.clone(),
                    other: other.support(),
                });
            }
        }
    }
    Ok(())
}

pub fn is_diagonal_basis(m: &Matroid, cand: &DiagonalBasisCandidate) -> bool {
    check_diagonal_basis(m, cand).is_ok()
}

/// The iterated residues `p_{I^{σ_I}}` of a validated diagonal basis; they
/// form the dual basis of `{e_I}`.
#[derive(Clone, Debug)]
pub struct DualBasis {
    level: usize,
    chains: Vec<ResidueChain>,
}

impl DualBasis {
    pub fn new(chi: &ChiMap, cand: &DiagonalBasisCandidate) -> Result<Self> {
        check_diagonal_basis(chi.matroid(), cand).map_err(|f| Error::NotDiagonal(f.to_string()))?;
        let chains = cand
            .elements
            .iter()
            .map(|t| ResidueChain::new(chi, t))
            .collect::<Result<_>>()?;
        Ok(DualBasis {
            level: cand.level,
            chains,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Coordinates of `a`: the coefficient of `I` is `p_{I^{σ_I}}(a)`.
    pub fn expand(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        a.check_degree(self.level)?;
        let mut out = AlgebraElement::zero();
        for chain in &self.chains {
            out.add_term(chain.order().support(), chain.apply(a)?);
        }
        Ok(out)
    }
}

/// Coordinates of `a` in a diagonal basis, read off with the dual basis of
/// iterated residues.
pub fn expand(
    chi: &ChiMap,
    cand: &DiagonalBasisCandidate,
    a: &AlgebraElement,
) -> Result<AlgebraElement> {
    DualBasis::new(chi, cand)?.expand(a)
}

/// Sum of the dual-basis coefficients of `a`.
pub fn sum_residues(
    chi: &ChiMap,
    cand: &DiagonalBasisCandidate,
    a: &AlgebraElement,
) -> Result<Scalar> {
    Ok(expand(chi, cand, a)?.coefficient_sum())
}

/// Checks of the sequence `0 → A(M \ x) → A(M) → A(M / x) → 0` in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub level: usize,
    pub dim: usize,
    pub dim_deletion: usize,
    /// `dim A_{ℓ-1}(M / x)`, zero for `ℓ = 0`.
    pub dim_contraction: usize,
    pub dims_add_up: bool,
    /// `p_x ∘ i_x = 0` on the NBC basis of `M \ x`.
    pub residue_kills_inclusion: bool,
    /// `p_x(e_{I ∪ x}) = e_I` for the NBC basis of `M / x` in degree `ℓ - 1`.
    pub section_is_right_inverse: bool,
    /// `i_x` maps the NBC basis of `M \ x` to independent vectors.
    pub inclusion_injective: bool,
    /// `p_x(∂e_U) = 0` in `A(M / x)` for every ideal generator of degree `ℓ`.
    pub residue_kills_ideal: bool,
}

impl DegreeCheck {
    pub fn passed(&self) -> bool {
        self.dims_add_up
            && self.residue_kills_inclusion
            && self.section_is_right_inverse
            && self.inclusion_injective
            && self.residue_kills_ideal
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSequenceReport {
    pub element: usize,
    /// The exactness statement assumes a simple matroid.
    pub simple: bool,
    pub degrees: Vec<DegreeCheck>,
}

impl ExactSequenceReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(DegreeCheck::passed)
    }
}

/// Verifies the split exact sequence for deleting and contracting `x`,
/// degree by degree. Every check runs; failures are reported, not raised.
pub fn verify_exact_sequence(chi: &ChiMap, x: usize) -> Result<ExactSequenceReport> {
    let m = chi.matroid();
    if !m.ground().contains(x) {
        return Err(Error::NotInGround {
            set: ElementSet::singleton(x),
            ground: m.ground(),
        });
    }
    if m.is_loop(x) {
        return Err(Error::ContractLoop(x));
    }
    let deleted = chi.delete(x)?;
    let contracted = chi.contract(x)?;
    let generators = crate::algebra::ideal_generators(chi);
    let mut degrees = Vec::new();
    for level in 0..=m.full_rank() {
        let dim = dimension(m, level);
        let dim_deletion = dimension(deleted.matroid(), level);
        let dim_contraction = if level == 0 {
            0
        } else {
            dimension(contracted.matroid(), level - 1)
        };

        let images: Vec<AlgebraElement> = deleted
            .matroid()
            .nbc_sets(level)
            .into_iter()
            .map(|i| inclusion(chi, x, &AlgebraElement::monomial(i)))
            .collect::<Result<_>>()?;
        let mut residue_kills_inclusion = true;
        for img in &images {
            let (_, p) = residue_step(chi, x, img)?;
            if !reduce_to_nbc(&contracted, &p).is_zero() {
                residue_kills_inclusion = false;
            }
        }
        let inclusion_injective = coefficient_rank(&images) == images.len();

        let mut section_is_right_inverse = true;
        if level > 0 {
            for i in contracted.matroid().nbc_sets(level - 1) {
                let lifted = reduce_to_nbc(chi, &AlgebraElement::monomial(i.with(x)));
                let (_, p) = residue_step(chi, x, &lifted)?;
                if reduce_to_nbc(&contracted, &p) != AlgebraElement::monomial(i) {
                    section_is_right_inverse = false;
                }
            }
        }

        let mut residue_kills_ideal = true;
        for g in generators.iter().filter(|g| g.degree == level) {
            let (_, p) = residue_step(chi, x, &g.element)?;
            if !reduce_to_nbc(&contracted, &p).is_zero() {
                residue_kills_ideal = false;
            }
        }

        degrees.push(DegreeCheck {
            level,
            dim,
            dim_deletion,
            dim_contraction,
            dims_add_up: dim == dim_deletion + dim_contraction,
            residue_kills_inclusion,
            section_is_right_inverse,
            inclusion_injective,
            residue_kills_ideal,
        });
    }
    Ok(ExactSequenceReport {
        element: x,
        simple: m.is_simple(),
        degrees,
    })
}

/// Rank of the coefficient matrix of a list of elements.
fn coefficient_rank(elements: &[AlgebraElement]) -> usize {
    let mut supports: Vec<ElementSet> = elements.iter().flat_map(|e| e.supports()).collect();
    supports.sort();
    supports.dedup();
    let rows: Vec<Vec<Scalar>> = elements
        .iter()
        .map(|e| supports.iter().map(|&s| e.coefficient(s)).collect())
        .collect();
    linalg::rank(&rows)
}

/// `Σ_p (-1)^p χ(U \ u_p)` over the sorted enumeration of `U`.
pub fn alternating_boundary_sum(chi: &ChiMap, u: ElementSet) -> Scalar {
    u.iter().enumerate().fold(Scalar::zero(), |acc, (k, e)| {
        let v = chi.eval_set(u.without(e));
        if k % 2 == 0 {
            acc - v
        } else {
            acc + v
        }
    })
}

/// True when `value` is `1`; used by the affine sum rule.
pub fn is_one(value: &Scalar) -> bool {
    value.is_one()
}
