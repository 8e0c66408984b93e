//! Matroids given by their circuits.
//!
//! Independence, rank and closure are answered from the circuit list by
//! containment checks and greedy extension. Minors keep the labels of the
//! parent, so the ground set of `M/x` is the ground set of `M` minus `x`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::ElementSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    ground: ElementSet,
    /// Sorted lexicographically.
    circuits: Vec<ElementSet>,
}

impl Matroid {
    /// Matroid on `{1..n}` with the given circuits, validated against the
    /// circuit axioms.
    pub fn new(n: usize, circuits: Vec<ElementSet>) -> Result<Self> {
        if n > crate::set::MAX_ELEMENT {
            return Err(Error::ElementOutOfRange(n));
        }
        Matroid::with_ground(ElementSet::range(n), circuits)
    }

    pub fn with_ground(ground: ElementSet, circuits: Vec<ElementSet>) -> Result<Self> {
        validate_circuits(ground, &circuits)?;
        Ok(Matroid::new_unchecked(ground, circuits))
    }

    /// Skips axiom validation. Only for circuit families known to be valid,
    /// such as those produced by minors or by a vector realization.
    pub fn new_unchecked(ground: ElementSet, mut circuits: Vec<ElementSet>) -> Self {
        circuits.sort();
        circuits.dedup();
        Matroid { ground, circuits }
    }

    /// The free matroid on `{1..n}`.
    pub fn free(n: usize) -> Self {
        Matroid::new_unchecked(ElementSet::range(n), Vec::new())
    }

    /// Uniform matroid `U(r, n)`.
    pub fn uniform(r: usize, n: usize) -> Self {
        Matroid::new_unchecked(
            ElementSet::range(n),
            ElementSet::range(n).combinations(r + 1).collect(),
        )
    }

    pub fn ground(&self) -> ElementSet {
        self.ground
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    pub fn circuits(&self) -> &[ElementSet] {
        &self.circuits
    }

    fn check(&self, x: ElementSet) -> Result<()> {
        if x.is_subset(self.ground) {
            Ok(())
        } else {
            Err(Error::NotInGround {
                set: x,
                ground: self.ground,
            })
        }
    }

    fn check_element(&self, x: usize) -> Result<()> {
        if self.ground.contains(x) {
            Ok(())
        } else if (1..=crate::set::MAX_ELEMENT).contains(&x) {
            Err(Error::NotInGround {
                set: ElementSet::singleton(x),
                ground: self.ground,
            })
        } else {
            Err(Error::ElementOutOfRange(x))
        }
    }

    pub fn is_independent(&self, x: ElementSet) -> Result<bool> {
        self.check(x)?;
        Ok(self.independent(x))
    }

    pub(crate) fn independent(&self, x: ElementSet) -> bool {
        x.is_subset(self.ground) && self.circuits.iter().all(|c| !c.is_subset(x))
    }

    pub fn rank(&self, x: ElementSet) -> Result<usize> {
        self.check(x)?;
        Ok(self.rk(x))
    }

    pub(crate) fn rk(&self, x: ElementSet) -> usize {
        self.basis_of(x).len()
    }

    /// Greedy basis of `x`, scanning elements in increasing order. This is
    /// the lexicographically smallest maximal independent subset.
    pub(crate) fn basis_of(&self, x: ElementSet) -> ElementSet {
        let mut b = ElementSet::EMPTY;
        for e in x.iter() {
            if self.independent(b.with(e)) {
                b.insert(e);
            }
        }
        b
    }

    pub fn full_rank(&self) -> usize {
        self.rk(self.ground)
    }

    pub fn closure(&self, x: ElementSet) -> Result<ElementSet> {
        self.check(x)?;
        Ok(self.cl(x))
    }

    pub(crate) fn cl(&self, x: ElementSet) -> ElementSet {
        let b = self.basis_of(x);
        let mut out = x;
        for e in self.ground.difference(x).iter() {
            if !self.independent(b.with(e)) {
                out.insert(e);
            }
        }
        out
    }

    pub fn is_flat(&self, x: ElementSet) -> Result<bool> {
        Ok(self.closure(x)? == x)
    }

    pub fn is_loop(&self, x: usize) -> bool {
        self.circuits.contains(&ElementSet::singleton(x))
    }

    /// No loops and no parallel pairs.
    pub fn is_simple(&self) -> bool {
        self.circuits.iter().all(|c| c.len() > 2)
    }

    /// `M \ x`, keeping the original labels.
    pub fn delete(&self, x: usize) -> Result<Matroid> {
        self.check_element(x)?;
        Ok(Matroid {
            ground: self.ground.without(x),
            circuits: self
                .circuits
                .iter()
                .copied()
                .filter(|c| !c.contains(x))
                .collect(),
        })
    }

    /// `M / x`, keeping the original labels. The circuits are the minimal
    /// nonempty sets `C \ x`.
    pub fn contract(&self, x: usize) -> Result<Matroid> {
        self.check_element(x)?;
        if self.is_loop(x) {
            return Err(Error::ContractLoop(x));
        }
        let mut candidates: Vec<ElementSet> = self.circuits.iter().map(|c| c.without(x)).collect();
        candidates.sort_by_key(|c| c.len());
        let mut minimal: Vec<ElementSet> = Vec::new();
        for c in candidates {
            if !minimal.iter().any(|m| m.is_subset(c)) {
                minimal.push(c);
            }
        }
        Ok(Matroid::new_unchecked(self.ground.without(x), minimal))
    }

    /// `C \ min(C)` for every circuit with more than one element, sorted.
    pub fn broken_circuits(&self) -> Vec<ElementSet> {
        let mut out: Vec<ElementSet> = self
            .broken_circuits_with_min()
            .into_iter()
            .map(|(b, _)| b)
            .collect();
        out.dedup();
        out
    }

    /// Broken circuits paired with the minimum of the circuit they come from,
    /// sorted by broken circuit and then by that minimum. The same broken
    /// circuit can arise from several circuits.
    pub fn broken_circuits_with_min(&self) -> Vec<(ElementSet, usize)> {
        let mut out: Vec<(ElementSet, usize)> = self
            .circuits
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let a = c.first().expect("nonempty circuit");
                (c.without(a), a)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_nbc(&self, x: ElementSet) -> bool {
        self.independent(x)
            && self
                .circuits
                .iter()
                .filter(|c| c.len() > 1)
                .all(|c| !c.without(c.first().unwrap()).is_subset(x))
    }

    /// No-broken-circuit sets of the given size, lexicographically ordered.
    pub fn nbc_sets(&self, level: usize) -> Vec<ElementSet> {
        self.ground
            .combinations(level)
            .filter(|&s| self.is_nbc(s))
            .collect()
    }

    /// Independent sets of the given size, lexicographically ordered.
    pub fn independent_sets(&self, level: usize) -> Vec<ElementSet> {
        self.ground
            .combinations(level)
            .filter(|&s| self.independent(s))
            .collect()
    }

    /// The unique circuit inside `u`, if there is exactly one.
    pub fn unique_circuit(&self, u: ElementSet) -> Option<ElementSet> {
        let mut inside = self.circuits.iter().filter(|c| c.is_subset(u));
        let first = inside.next()?;
        inside.next().is_none().then_some(*first)
    }

    pub fn is_unidependent(&self, u: ElementSet) -> bool {
        self.unique_circuit(u).is_some()
    }

    /// Elements `a` of `cl(I) \ I` that are the minimum of the circuit in `I ∪ a`.
    pub fn active_elements(&self, i: ElementSet) -> Result<ElementSet> {
        if !self.is_independent(i)? {
            return Err(Error::Dependent(i));
        }
        Ok(self
            .cl(i)
            .difference(i)
            .iter()
            .filter(|&a| {
                self.unique_circuit(i.with(a))
                    .and_then(|c| c.first())
                    .is_some_and(|m| m == a)
            })
            .collect())
    }

    /// `u` is unidependent and the minimum `c` of its circuit is the least
    /// active element of `u \ c`.
    pub fn is_inactive_unidependent(&self, u: ElementSet) -> bool {
        let Some(c) = self.unique_circuit(u) else {
            return false;
        };
        let m = c.first().expect("nonempty circuit");
        self.active_elements(u.without(m))
            .ok()
            .and_then(|a| a.first())
            .is_some_and(|least| least == m)
    }

    /// The element of `i` parallel to `x`, if any.
    pub fn parallel_partner(&self, i: ElementSet, x: usize) -> Option<usize> {
        i.without(x)
            .iter()
            .find(|&y| self.circuits.contains(&ElementSet::from([x, y])))
    }
}

/// Checks the circuit axioms: nonempty, inside the ground set, an antichain,
/// and circuit elimination.
pub fn validate_circuits(ground: ElementSet, circuits: &[ElementSet]) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidCircuits(m));
    for (k, &c) in circuits.iter().enumerate() {
        if c.is_empty() {
            return bad("the empty set is not a circuit".into());
        }
        if !c.is_subset(ground) {
            return bad(format!("circuit {c} leaves the ground set {ground}"));
        }
        for &d in &circuits[..k] {
            if c == d {
                return bad(format!("circuit {c} is listed twice"));
            }
            if c.is_subset(d) || d.is_subset(c) {
                return bad(format!("circuits {c} and {d} are nested"));
            }
        }
    }
    for (k, &c1) in circuits.iter().enumerate() {
        for &c2 in &circuits[k + 1..] {
            let union = c1.union(c2);
            for e in c1.intersection(c2).iter() {
                let rest = union.without(e);
                if !circuits.iter().any(|c| c.is_subset(rest)) {
                    return bad(format!(
                        "elimination fails for {c1}, {c2} at {e}: no circuit inside {rest}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// On-disk matroid description: `{"n": 4, "circuits": [[1,2,3], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatroidFile {
    pub n: usize,
    pub circuits: Vec<ElementSet>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unchecked: bool,
}

impl MatroidFile {
    pub fn into_matroid(self) -> Result<Matroid> {
        if self.n > crate::set::MAX_ELEMENT {
            return Err(Error::ElementOutOfRange(self.n));
        }
        let ground = ElementSet::range(self.n);
        if self.unchecked {
            if let Some(c) = self.circuits.iter().find(|c| !c.is_subset(ground)) {
                return Err(Error::InvalidCircuits(format!(
                    "circuit {c} leaves the ground set {ground}"
                )));
            }
            Ok(Matroid::new_unchecked(ground, self.circuits))
        } else {
            Matroid::with_ground(ground, self.circuits)
        }
    }
}

impl From<&Matroid> for MatroidFile {
    fn from(m: &Matroid) -> Self {
        MatroidFile {
            n: m.ground().last().unwrap_or(0),
            circuits: m.circuits().to_vec(),
            unchecked: false,
        }
    }
}

pub fn parse_matroid(text: &str) -> Result<Matroid> {
    let file: MatroidFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    file.into_matroid()
}
