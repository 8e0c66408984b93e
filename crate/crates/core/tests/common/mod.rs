#![allow(dead_code)]

use osalg_core::linalg::{self, int};
use osalg_core::{
    parse_arrangement, Arrangement, ChiKind, ChiMap, DiagonalBasisCandidate, ElementSet, Matroid,
    OrderedTuple, Scalar,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIG1_JSON: &str = include_str!("../../../../data/fig1.json");
pub const B3_JSON: &str = include_str!("../../../../data/fig1_b3.json");

pub const KINDS: [ChiKind; 3] = [
    ChiKind::OrlikSolomon,
    ChiKind::OrlikTerao,
    ChiKind::OrientedSign,
];

pub struct Case {
    pub name: String,
    pub arrangement: Arrangement,
}

impl Case {
    pub fn matroid(&self) -> Matroid {
        self.arrangement.matroid()
    }

    pub fn chi(&self, kind: ChiKind) -> ChiMap {
        make_chi(kind, &self.arrangement)
    }
}

pub fn make_chi(kind: ChiKind, a: &Arrangement) -> ChiMap {
    match kind {
        ChiKind::OrlikSolomon => ChiMap::orlik_solomon(&a.matroid()),
        ChiKind::OrlikTerao => ChiMap::orlik_terao(a).unwrap(),
        ChiKind::OrientedSign => ChiMap::oriented_sign(a).unwrap(),
    }
}

pub fn fig1() -> Arrangement {
    parse_arrangement(FIG1_JSON).unwrap()
}

pub fn u24() -> Arrangement {
    Arrangement::from_integers(2, &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]).unwrap()
}

pub fn u35() -> Arrangement {
    Arrangement::from_integers(
        3,
        &[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
            vec![1, 2, 3],
        ],
    )
    .unwrap()
}

/// Graphic matroid of the complete graph on four vertices, edges as
/// differences of coordinate vectors with the fourth vertex at the origin.
pub fn k4() -> Arrangement {
    Arrangement::from_integers(
        3,
        &[
            vec![1, -1, 0],
            vec![1, 0, -1],
            vec![1, 0, 0],
            vec![0, 1, -1],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ],
    )
    .unwrap()
}

fn is_simple_config(vectors: &[Vec<i64>]) -> bool {
    let rows: Vec<Vec<Scalar>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| int(x)).collect())
        .collect();
    rows.iter()
        .all(|v| linalg::rank(std::slice::from_ref(v)) == 1)
        && rows.iter().enumerate().all(|(i, v)| {
            rows[i + 1..]
                .iter()
                .all(|w| linalg::rank(&[v.clone(), w.clone()]) == 2)
        })
}

/// Simple configurations with small integer entries, so that coincidences
/// (non-generic dependencies) are frequent.
pub fn random_config(rng: &mut ChaCha8Rng, max_n: usize, max_d: usize) -> Arrangement {
    loop {
        let d = rng.gen_range(2..=max_d);
        let n = rng.gen_range(d + 1..=max_n);
        let vectors: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        if is_simple_config(&vectors) {
            return Arrangement::from_integers(d, &vectors).unwrap();
        }
    }
}

/// Points of the hyperplane `x_d = 1`, pairwise distinct. At least `d + 2`
/// of them: with `d + 1` points in general position the only diagonal bases
/// are the `d + 1` relabeled NBC bases.
pub fn random_affine_config(rng: &mut ChaCha8Rng, max_n: usize, max_d: usize) -> Arrangement {
    loop {
        let d = rng.gen_range(2..=max_d);
        let n = rng.gen_range(d + 2..=max_n);
        let vectors: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                let mut v: Vec<i64> = (0..d - 1).map(|_| rng.gen_range(-2..=2)).collect();
                v.push(1);
                v
            })
            .collect();
        if is_simple_config(&vectors) {
            return Arrangement::from_integers(d, &vectors).unwrap();
        }
    }
}

pub fn random_configs(seed: u64, count: usize) -> Vec<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_config(&mut rng, 8, 4)).collect()
}

pub fn random_affine_configs(seed: u64, count: usize) -> Vec<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_affine_config(&mut rng, 8, 4))
        .collect()
}

pub fn named_cases() -> Vec<Case> {
    vec![
        Case {
            name: "fig1".into(),
            arrangement: fig1(),
        },
        Case {
            name: "U(2,4)".into(),
            arrangement: u24(),
        },
        Case {
            name: "U(3,5)".into(),
            arrangement: u35(),
        },
        Case {
            name: "K4".into(),
            arrangement: k4(),
        },
    ]
}

/// The named matroids followed by 20 random simple configurations.
pub fn test_cases() -> Vec<Case> {
    let mut cases = named_cases();
    for (k, a) in random_configs(0x05a1_9e6b, 20).into_iter().enumerate() {
        cases.push(Case {
            name: format!("random#{k}"),
            arrangement: a,
        });
    }
    cases
}

pub fn set(v: &[usize]) -> ElementSet {
    ElementSet::try_from_elements(v.iter().copied()).unwrap()
}

pub fn tuple(v: &[usize]) -> OrderedTuple {
    OrderedTuple::new(v.to_vec()).unwrap()
}

/// All orderings of `s`.
pub fn orderings(s: ElementSet) -> Vec<OrderedTuple> {
    use itertools::Itertools;
    let k = s.len();
    s.iter()
        .permutations(k)
        .map(|p| OrderedTuple::new(p).unwrap())
        .collect()
}

/// NBC sets for the total order `rank_of` (smaller rank = smaller element),
/// each with its elements in increasing order. Computed from the circuits
/// directly.
pub fn nbc_for_order(m: &Matroid, rank_of: &[usize], level: usize) -> DiagonalBasisCandidate {
    let key = |e: usize| rank_of[e];
    let broken: Vec<ElementSet> = m
        .circuits()
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| c.without(c.iter().min_by_key(|&e| key(e)).unwrap()))
        .collect();
    let elements = m
        .ground()
        .combinations(level)
        .filter(|s| m.circuits().iter().all(|c| !c.is_subset(*s)))
        .filter(|s| broken.iter().all(|b| !b.is_subset(*s)))
        .map(|s| {
            let mut v = s.to_vec();
            v.sort_by_key(|&e| key(e));
            OrderedTuple::new(v).unwrap()
        })
        .collect();
    DiagonalBasisCandidate::new(level, elements)
}

/// NBC bases for random relabelings of the ground set, distinct from the
/// identity one and from each other.
pub fn relabeled_nbc_bases(
    m: &Matroid,
    level: usize,
    rng: &mut ChaCha8Rng,
    wanted: usize,
) -> Vec<DiagonalBasisCandidate> {
    let identity = DiagonalBasisCandidate::nbc(m, level);
    let mut found: Vec<DiagonalBasisCandidate> = Vec::new();
    let n = m.ground().last().unwrap_or(0);
    for _ in 0..200 {
        if found.len() == wanted {
            break;
        }
        let mut labels: Vec<usize> = (1..=n).collect();
        labels.shuffle(rng);
        let mut rank_of = vec![0; n + 1];
        for (r, &e) in labels.iter().enumerate() {
            rank_of[e] = r;
        }
        let cand = nbc_for_order(m, &rank_of, level);
        let same = |a: &DiagonalBasisCandidate, b: &DiagonalBasisCandidate| {
            let mut x = a.elements.clone();
            let mut y = b.elements.clone();
            x.sort_by_key(|t| t.entries().to_vec());
            y.sort_by_key(|t| t.entries().to_vec());
            x == y
        };
        if !same(&cand, &identity) && found.iter().all(|f| !same(f, &cand)) {
            found.push(cand);
        }
    }
    found
}

/// Flag of an ordered tuple from linear spans alone.
pub fn span_flag(a: &Arrangement, t: &OrderedTuple) -> Vec<ElementSet> {
    let mut acc = ElementSet::EMPTY;
    t.entries()
        .iter()
        .rev()
        .map(|&e| {
            acc.insert(e);
            a.span_closure(acc)
        })
        .collect()
}
