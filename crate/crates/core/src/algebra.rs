//! The graded algebra `E` with `e_i² = 0` and `e_j e_i = β_{i,j} e_i e_j`,
//! the χ-boundary, the ideal `ℑ_χ(M)` and straightening to the NBC basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chi::ChiMap;
use crate::error::{Error, Result};
use crate::linalg::{self, Scalar};
use crate::matroid::Matroid;
use crate::set::{ElementSet, OrderedTuple};

/// A single term `c · e_X` with `X` sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub support: ElementSet,
    pub coeff: Scalar,
}

/// A finite linear combination of sorted monomials. Zero coefficients are
/// never stored, so equality is structural.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<ElementSet, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn one() -> Self {
        AlgebraElement::monomial(ElementSet::EMPTY)
    }

    /// `e_X`.
    pub fn monomial(support: ElementSet) -> Self {
        AlgebraElement::term(support, Scalar::one())
    }

    pub fn term(support: ElementSet, coeff: Scalar) -> Self {
        let mut a = AlgebraElement::zero();
        a.add_term(support, coeff);
        a
    }

    pub fn from_terms<I: IntoIterator<Item = (ElementSet, Scalar)>>(terms: I) -> Self {
        let mut a = AlgebraElement::zero();
        for (s, c) in terms {
            a.add_term(s, c);
        }
        a
    }

    pub fn add_term(&mut self, support: ElementSet, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(support).or_insert_with(Scalar::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&support);
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, factor: &Scalar) {
        for (s, c) in other.iter() {
            self.add_term(s, c * factor);
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> Self {
        let mut out = AlgebraElement::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn plus(&self, other: &AlgebraElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn minus(&self, other: &AlgebraElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn coeff(&self, support: ElementSet) -> Option<&Scalar> {
        self.terms.get(&support)
    }

    /// Coefficient of `e_X`, zero when absent.
    pub fn coefficient(&self, support: ElementSet) -> Scalar {
        self.terms
            .get(&support)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementSet, &Scalar)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn supports(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.terms.keys().copied()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|s| s.len());
        let d = degrees.next()?;
        degrees.all(|x| x == d).then_some(d)
    }

    /// Checks that the element is homogeneous of degree `level` (zero passes).
    pub fn check_degree(&self, level: usize) -> Result<()> {
        if self.terms.keys().all(|s| s.len() == level) {
            Ok(())
        } else {
            let found: Vec<usize> = self.terms.keys().map(|s| s.len()).collect();
            Err(Error::DegreeMismatch {
                expected: level,
                found: format!("{found:?}"),
            })
        }
    }

    pub fn coefficient_sum(&self) -> Scalar {
        self.terms.values().fold(Scalar::zero(), |acc, c| acc + c)
    }

    pub fn to_file(&self) -> ElementFile {
        ElementFile {
            terms: self
                .iter()
                .map(|(support, c)| TermFile {
                    support,
                    coeff: linalg::format_scalar(c),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("element serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ElementFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            context: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        file.into_element()
    }
}

/// Compact label list: `125` when every label is a single digit, `1,12`
/// otherwise.
pub fn support_label(s: ElementSet) -> String {
    let v = s.to_vec();
    let sep = if v.iter().all(|&e| e < 10) { "" } else { "," };
    v.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

impl fmt::Display for AlgebraElement {
    /// `-e[125] + 2 e[135]`; `0` for the zero element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs} ")?;
            }
            write!(f, "e[{}]", support_label(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized element: `{"terms": [{"support": [1,2,5], "coeff": "-1/2"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ElementFile {
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermFile {
    pub support: ElementSet,
    pub coeff: String,
}

impl ElementFile {
    pub fn into_element(self) -> Result<AlgebraElement> {
        let mut a = AlgebraElement::zero();
        for (k, t) in self.terms.into_iter().enumerate() {
            let c = linalg::parse_scalar(&t.coeff).map_err(|e| Error::Parse {
                context: format!("terms[{k}].coeff"),
                message: e.to_string(),
            })?;
            a.add_term(t.support, c);
        }
        Ok(a)
    }
}

/// `β_{X,Y}` with `e_X e_Y = β_{X,Y} e_{X ∪ Y}`: the product of `β_{j,i}`
/// over pairs `i ∈ X`, `j ∈ Y` with `i > j`.
pub fn beta_product(chi: &ChiMap, x: ElementSet, y: ElementSet) -> Result<Scalar> {
    if !x.is_disjoint(y) {
        return Err(Error::Overlap(x, y));
    }
    let beta = chi.beta();
    let mut acc = Scalar::one();
    for i in x.iter() {
        for j in y.iter().take_while(|&j| j < i) {
            acc *= beta.get(j, i);
        }
    }
    Ok(acc)
}

/// Rewrites the word `e_{t_1} ⋯ e_{t_m}` as a multiple of a sorted monomial
/// by adjacent swaps. `None` when an entry repeats (`e_i² = 0`).
pub fn normalize_tuple(chi: &ChiMap, t: &[usize]) -> Option<Monomial> {
    let mut word = t.to_vec();
    let mut coeff = Scalar::one();
    let beta = chi.beta();
    // Bubble sort; each swap of a descent (b, a), a < b, picks up β_{a,b}.
    let n = word.len();
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n.saturating_sub(pass + 1) {
            let (a, b) = (word[k], word[k + 1]);
            if a == b {
                return None;
            }
            if a > b {
                coeff *= beta.get(b, a);
                word.swap(k, k + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    if word.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(Monomial {
        support: word.iter().copied().collect(),
        coeff,
    })
}

/// Product in `E` (not reduced modulo the ideal).
pub fn multiply(chi: &ChiMap, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (x, ca) in a.iter() {
        for (y, cb) in b.iter() {
            if !x.is_disjoint(y) {
                continue;
            }
            let beta = beta_product(chi, x, y).expect("disjoint supports");
            out.add_term(x.union(y), ca * cb * beta);
        }
    }
    out
}

/// `∂e_X = Σ_p (-1)^p χ(X \ i_p) e_{X \ i_p}` over the sorted enumeration of
/// `X`, dropping terms where χ vanishes. With `χ(∅) = 1`, `∂e_x = -e_∅`.
pub fn boundary(chi: &ChiMap, x: ElementSet) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (k, e) in x.iter().enumerate() {
        let rest = x.without(e);
        let v = chi.eval_set(rest);
        if v.is_zero() {
            continue;
        }
        // p = k + 1
        out.add_term(rest, if k % 2 == 0 { -v } else { v });
    }
    out
}

pub fn boundary_of(chi: &ChiMap, a: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (s, c) in a.iter() {
        out.add_scaled(&boundary(chi, s), c);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSource {
    /// `e_D` for a dependent set `D`.
    Dependent(ElementSet),
    /// `∂e_U` for an inactive unidependent `U` whose circuit is not a loop.
    Boundary(ElementSet),
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealGenerator {
    pub degree: usize,
    pub source: GeneratorSource,
    pub element: AlgebraElement,
}

/// A basis of the ideal `ℑ_χ(M)`: every `e_D` with `D` dependent and every
/// `∂e_U` with `U` an inactive unidependent whose circuit has more than one
/// element. Sorted by degree, then by the defining set.
pub fn ideal_generators(chi: &ChiMap) -> Vec<IdealGenerator> {
    let m = chi.matroid();
    let mut out = Vec::new();
    for s in m.ground().subsets() {
        if !m.independent(s) {
            out.push(IdealGenerator {
                degree: s.len(),
                source: GeneratorSource::Dependent(s),
                element: AlgebraElement::monomial(s),
            });
        }
        let loop_circuit = m.unique_circuit(s).is_some_and(|c| c.len() == 1);
        if !loop_circuit && m.is_inactive_unidependent(s) {
            out.push(IdealGenerator {
                degree: s.len() - 1,
                source: GeneratorSource::Boundary(s),
                element: boundary(chi, s),
            });
        }
    }
    out.sort_by(|a, b| {
        let key = |g: &IdealGenerator| match g.source {
            GeneratorSource::Dependent(s) => (0, s),
            GeneratorSource::Boundary(s) => (1, s),
        };
        (a.degree, key(a)).cmp(&(b.degree, key(b)))
    });
    out
}

/// One rewriting step of the straightening: the independent support `from`
/// contained the broken circuit `broken` (of the circuit with minimum
/// `alpha`) and was replaced by the supports in `to`.
#[derive(Clone, Debug, PartialEq)]
pub struct RewriteStep {
    pub from: ElementSet,
    pub broken: ElementSet,
    pub alpha: usize,
    pub to: Vec<ElementSet>,
}

/// The unique representative of `a` modulo the ideal supported on NBC sets.
pub fn reduce_to_nbc(chi: &ChiMap, a: &AlgebraElement) -> AlgebraElement {
    reduce_to_nbc_with(chi, a, |_| 0).0
}

/// Straightening with a caller-chosen broken circuit at each step.
///
/// `choose` receives the applicable `(broken circuit, circuit minimum)` pairs,
/// sorted lexicographically, and returns an index into them. The result does
/// not depend on the choices; the returned trace does.
pub fn reduce_to_nbc_with<F>(
    chi: &ChiMap,
    a: &AlgebraElement,
    mut choose: F,
) -> (AlgebraElement, Vec<RewriteStep>)
where
    F: FnMut(&[(ElementSet, usize)]) -> usize,
{
    let m = chi.matroid();
    let broken = m.broken_circuits_with_min();
    let mut work = AlgebraElement::zero();
    for (s, c) in a.iter() {
        if m.independent(s) {
            work.add_term(s, c.clone());
        }
    }
    let mut trace = Vec::new();
    loop {
        // Largest non-NBC support first; rewriting only ever produces
        // supports that are smaller in the order comparing largest elements.
        let target = work
            .supports()
            .filter(|&s| !m.is_nbc(s))
            .max_by(|x, y| colex(*x, *y));
        let Some(support) = target else { break };
        let options: Vec<(ElementSet, usize)> = broken
            .iter()
            .filter(|(b, _)| b.is_subset(support))
            .copied()
            .collect();
        let pick = choose(&options).min(options.len() - 1);
        let (bc, alpha) = options[pick];
        let coeff = work.terms.remove(&support).expect("support present");
        let replacement = straighten(chi, support, alpha);
        trace.push(RewriteStep {
            from: support,
            broken: bc,
            alpha,
            to: replacement.supports().collect(),
        });
        work.add_scaled(&replacement, &coeff);
    }
    (work, trace)
}

/// `e_I` rewritten through `∂e_U ≡ 0` with `U = I ∪ α`:
/// `e_I = -χ(I)⁻¹ Σ_{p ≠ p_α} (-1)^{p - p_α} χ(U \ u_p) e_{U \ u_p}`.
fn straighten(chi: &ChiMap, support: ElementSet, alpha: usize) -> AlgebraElement {
    let u = support.with(alpha);
    let p_alpha = u.position(alpha).expect("alpha in U");
    let inv = chi.eval_set(support).recip();
    let mut out = AlgebraElement::zero();
    for (k, e) in u.iter().enumerate() {
        let p = k + 1;
        if p == p_alpha {
            continue;
        }
        let rest = u.without(e);
        let v = chi.eval_set(rest);
        if v.is_zero() {
            continue;
        }
        let sign = if (p + p_alpha).is_multiple_of(2) {
            -Scalar::one()
        } else {
            Scalar::one()
        };
        out.add_term(rest, sign * v * &inv);
    }
    out
}

/// Order comparing the largest element where two sets differ.
pub fn colex(a: ElementSet, b: ElementSet) -> std::cmp::Ordering {
    let diff = a.bits() ^ b.bits();
    if diff == 0 {
        return std::cmp::Ordering::Equal;
    }
    let top = 1u64 << (63 - diff.leading_zeros());
    if a.bits() & top != 0 {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Less
    }
}

/// `dim A_ℓ(M) = |NBC_ℓ(M)|`.
pub fn dimension(m: &Matroid, level: usize) -> usize {
    m.nbc_sets(level).len()
}

/// `dim A_ℓ` for `ℓ = 0..=rank`.
pub fn dimensions(m: &Matroid) -> Vec<usize> {
    (0..=m.full_rank()).map(|l| dimension(m, l)).collect()
}

/// Convenience: `e_t` for an ordered word, normalized.
pub fn word(chi: &ChiMap, t: &OrderedTuple) -> AlgebraElement {
    match normalize_tuple(chi, t.entries()) {
        Some(m) => AlgebraElement::term(m.support, m.coeff),
        None => AlgebraElement::zero(),
    }
}
