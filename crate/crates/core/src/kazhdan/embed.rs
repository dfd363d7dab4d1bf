use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::magnus::default_degree;
use super::truncation::splitmix;
use super::word::{ball, Word};
use crate::error::{Error, Result};
use crate::finstruct::ClassId;

/// A clopen subset of `2^{F₂}`: the points whose restriction to `support` is one
/// of `patterns` (bit `i` of a pattern is the value at `support[i]`). Kept
/// normalized: support sorted, every coordinate relevant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clopen {
    support: Vec<Word>,
    patterns: Vec<u32>,
}

impl Clopen {
    pub fn new(support: Vec<Word>, patterns: impl IntoIterator<Item = u32>) -> Self {
        let mut pairs: Vec<(Word, usize)> = support.into_iter().enumerate().map(|(i, w)| (w, i)).collect();
        pairs.sort();
        let mut set: BTreeSet<u32> = patterns
            .into_iter()
            .map(|p| pairs.iter().enumerate().fold(0, |acc, (new, &(_, old))| acc | ((p >> old) & 1) << new))
            .collect();
        let mut support: Vec<Word> = pairs.into_iter().map(|p| p.0).collect();
        let mut i = 0;
        while i < support.len() {
            if set.iter().all(|p| set.contains(&(p ^ 1 << i))) {
                let low = (1u32 << i) - 1;
                set = set.iter().map(|p| (p & low) | (p >> (i + 1)) << i).collect();
                support.remove(i);
            } else {
                i += 1;
            }
        }
        Clopen { support, patterns: set.into_iter().collect() }
    }

    pub fn support(&self) -> &[Word] {
        &self.support
    }

    /// Neither empty nor everything.
    pub fn is_nontrivial(&self) -> bool {
        !self.patterns.is_empty() && !self.support.is_empty()
    }

    /// `g·C = {g·ω : ω ∈ C}` with `(g·ω)(h) = ω(g⁻¹h)`: the support moves to `gS`.
    pub fn translate(&self, g: &Word) -> Clopen {
        Clopen::new(self.support.iter().map(|s| g.mul(s)).collect(), self.patterns.iter().copied())
    }
}

/// Points of the structure on which `F₂` acts freely.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SamplePoint {
    Word(Word),
    /// A finitely supported vector `Σ c_g e_g`, coefficients in `1..q`.
    Vector(Vec<(Word, u8)>),
    Clopen(Clopen),
}

impl std::fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SamplePoint::Word(w) => write!(f, "{w}"),
            SamplePoint::Vector(v) => {
                let terms: Vec<String> = v.iter().map(|(g, c)| format!("{c}·e[{g}]")).collect();
                write!(f, "{}", terms.join(" + "))
            }
            SamplePoint::Clopen(c) => {
                let s: Vec<String> = c.support.iter().map(Word::to_string).collect();
                write!(f, "clopen({}; {:?})", s.join(","), c.patterns)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    /// Left multiplication on `F₂`.
    LeftRegular,
    /// Left multiplication, order-preserving for the Magnus order at this degree.
    MagnusOrder { degree: usize },
    /// Basis of `F_q^{(F₂)}` labeled by `F₂`.
    Basis { q: u8 },
    /// The shift on `2^{F₂}` acting on clopen sets.
    Shift,
    /// Left multiplication on a Cayley graph whose connection set is drawn from
    /// the pairs `{g, g⁻¹}` in the ball of radius `2·radius`.
    Cayley { seed: u64, radius: usize },
}

/// An embedding `F₂ → Aut(X)` evaluated on a finite sample of `X`.
#[derive(Debug, Clone, Serialize)]
pub struct F2Embedding {
    pub class: ClassId,
    pub payload: Payload,
    /// Sample points are words, or supports inside the ball of this radius.
    pub point_radius: usize,
    /// Largest support of a sampled vector or clopen set.
    pub support_bound: usize,
}

pub fn f2_embedding(class: ClassId, seed: u64) -> F2Embedding {
    let (payload, point_radius, support_bound) = match class {
        ClassId::PureSet => (Payload::LeftRegular, 3, 1),
        ClassId::LinearOrder => (Payload::MagnusOrder { degree: default_degree(8) }, 3, 1),
        ClassId::VectorSpace { q } => (Payload::Basis { q }, 2, 3),
        ClassId::BooleanAlgebra => (Payload::Shift, 2, 3),
        ClassId::Graph => (Payload::Cayley { seed, radius: 6 }, 3, 1),
    };
    F2Embedding { class, payload, point_radius, support_bound }
}

fn subsets(items: &[Word], max: usize) -> Vec<Vec<Word>> {
    let mut out: Vec<Vec<Word>> = vec![vec![]];
    let mut frontier = out.clone();
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |l| items.iter().position(|x| x == l).unwrap() + 1);
            for x in &items[start..] {
                let mut t = s.clone();
                t.push(x.clone());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.remove(0);
    out
}

impl F2Embedding {
    /// The Kazhdan set: the two free generators.
    pub fn kazhdan_set(&self) -> [Word; 2] {
        [Word::x(), Word::y()]
    }

    pub fn act(&self, g: &Word, p: &SamplePoint) -> SamplePoint {
        match p {
            SamplePoint::Word(x) => SamplePoint::Word(g.mul(x)),
            SamplePoint::Vector(v) => {
                let mut moved: Vec<(Word, u8)> = v.iter().map(|(h, c)| (g.mul(h), *c)).collect();
                moved.sort();
                SamplePoint::Vector(moved)
            }
            SamplePoint::Clopen(c) => SamplePoint::Clopen(c.translate(g)),
        }
    }

    /// Whether `g·p = p`. A clopen set's normalized support is its minimal
    /// support and translates to `gS`, so only `gS = S` needs the full comparison.
    pub fn fixes(&self, g: &Word, p: &SamplePoint) -> bool {
        if let SamplePoint::Clopen(c) = p {
            let mut moved: Vec<Word> = c.support.iter().map(|s| g.mul(s)).collect();
            moved.sort();
            if moved != c.support {
                return false;
            }
        }
        self.act(g, p) == *p
    }

    /// The free-action domain: words, nonzero vectors, or nontrivial clopen sets.
    pub fn sample_points(&self) -> Vec<SamplePoint> {
        let words = ball(self.point_radius);
        match self.payload {
            Payload::LeftRegular | Payload::MagnusOrder { .. } | Payload::Cayley { .. } => {
                words.into_iter().map(SamplePoint::Word).collect()
            }
            Payload::Basis { q } => {
                let mut out = Vec::new();
                for s in subsets(&words, self.support_bound) {
                    let mut coeffs = vec![1u8; s.len()];
                    loop {
                        out.push(SamplePoint::Vector(s.iter().cloned().zip(coeffs.iter().copied()).collect()));
                        let Some(i) = coeffs.iter().position(|&c| c + 1 < q) else { break };
                        coeffs[i] += 1;
                        coeffs[..i].iter_mut().for_each(|c| *c = 1);
                    }
                }
                out
            }
            Payload::Shift => {
                let mut out = Vec::new();
                for s in subsets(&words, self.support_bound) {
                    let k = s.len();
                    for family in 1u64..(1u64 << (1 << k)) - 1 {
                        let patterns = (0..1u32 << k).filter(|p| family >> p & 1 == 1);
                        let c = Clopen::new(s.clone(), patterns);
                        // keep each set once, at its minimal support
                        if c.support.len() == k {
                            out.push(SamplePoint::Clopen(c));
                        }
                    }
                }
                out
            }
        }
    }

    /// Whether `x ~ y` in the Cayley graph, or `None` when `x⁻¹y` lies outside
    /// the sampled ball.
    pub fn edge(&self, x: &Word, y: &Word) -> Option<bool> {
        let Payload::Cayley { seed, radius } = self.payload else { return None };
        let d = x.inverse().mul(y);
        if d.len() > 2 * radius {
            return None;
        }
        Some(in_connection_set(seed, &d))
    }
}

/// Membership of `g` in the connection set, decided once per pair `{g, g⁻¹}`.
fn in_connection_set(seed: u64, g: &Word) -> bool {
    if g.is_identity() {
        return false;
    }
    let code = g.code().min(g.inverse().code());
    splitmix(seed ^ splitmix(code as u64 ^ splitmix((code >> 64) as u64))) & 1 == 1
}

#[derive(Debug, Clone, Serialize)]
pub struct FreenessCertificate {
    pub class: ClassId,
    #[serde(rename = "Q")]
    pub q: [Word; 2],
    #[serde(rename = "L")]
    pub word_length: usize,
    pub points_tested: usize,
    pub words_tested: usize,
    pub pass: bool,
}

/// `w·p ≠ p` for every reduced `w ≠ 1` with `|w| ≤ L` and every sample point.
pub fn freeness_check(e: &F2Embedding, word_length: usize) -> Result<FreenessCertificate> {
    let points = e.sample_points();
    let words: Vec<Word> = ball(word_length).into_iter().skip(1).collect();
    for w in &words {
        // clopen samples come grouped by support, so the support test is reused
        let mut last: Option<(&[Word], bool)> = None;
        for p in &points {
            if let SamplePoint::Clopen(c) = p {
                let moves = match last {
                    Some((s, m)) if s == c.support() => m,
                    _ => {
                        let mut moved: Vec<Word> = c.support.iter().map(|s| w.mul(s)).collect();
                        moved.sort();
                        moved != c.support
                    }
                };
                last = Some((c.support(), moves));
                if moves {
                    continue;
                }
            }
            if e.fixes(w, p) {
                return Err(Error::FreenessViolation(format!("{w} fixes {p}")));
            }
        }
    }
    Ok(FreenessCertificate {
        class: e.class,
        q: e.kazhdan_set(),
        word_length,
        points_tested: points.len(),
        words_tested: words.len(),
        pass: true,
    })
}

/// Counterexamples to `(uv)·p = u·(v·p)` over all `u, v` of length ≤ `len` and a
/// sample of points.
pub fn homomorphism_check(e: &F2Embedding, len: usize, max_points: usize) -> Vec<String> {
    let words = ball(len);
    let points = e.sample_points();
    let step = (points.len() / max_points.max(1)).max(1);
    let mut bad = Vec::new();
    for p in points.iter().step_by(step) {
        for u in &words {
            for v in &words {
                if e.act(&u.mul(v), p) != e.act(u, &e.act(v, p)) {
                    bad.push(format!("u = {u}, v = {v}, p = {p}"));
                }
            }
        }
    }
    bad
}

/// Pairs `x, y` in the ball of radius `r` and `g` of length ≤ `len` for which
/// left multiplication by `g` changes adjacency.
pub fn cayley_edge_invariance(e: &F2Embedding, r: usize, len: usize) -> Result<usize> {
    let pts = ball(r);
    let mut bad = 0;
    for g in ball(len) {
        for x in &pts {
            for y in &pts {
                let before = e.edge(x, y);
                let after = e.edge(&g.mul(x), &g.mul(y));
                if before.is_none() {
                    return Err(Error::TruncationTooSmall(format!("{x}⁻¹{y} outside the connection ball")));
                }
                bad += usize::from(before != after);
            }
        }
    }
    Ok(bad)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionReport {
    pub seed: u64,
    pub radius: usize,
    pub max_size: usize,
    pub instances: usize,
    pub satisfied: usize,
    pub rate: f64,
    /// Up to ten `(U, V)` without a witness.
    pub missing: Vec<(Vec<Word>, Vec<Word>)>,
}

/// For disjoint `U, V` in the ball of radius `r - 1` with `1 ≤ |U| + |V| ≤ t`,
/// looks in the ball of radius `r` for a vertex joined to all of `U` and to none
/// of `V`.
pub fn cayley_extension_check(seed: u64, r: usize, t: usize) -> Result<ExtensionReport> {
    if r == 0 {
        return Err(Error::TruncationTooSmall("radius must be positive".into()));
    }
    let e = F2Embedding {
        class: ClassId::Graph,
        payload: Payload::Cayley { seed, radius: r },
        point_radius: r,
        support_bound: 1,
    };
    let inner = ball(r - 1);
    let outer = ball(r);
    let mut report = ExtensionReport {
        seed,
        radius: r,
        max_size: t,
        instances: 0,
        satisfied: 0,
        rate: 1.0,
        missing: Vec::new(),
    };
    for set in subsets(&inner, t) {
        // every way to split the set into U and V
        for mask in 0u32..1 << set.len() {
            let (u, v): (Vec<(usize, &Word)>, Vec<(usize, &Word)>) =
                set.iter().enumerate().partition(|(i, _)| mask >> i & 1 == 1);
            let u: Vec<Word> = u.into_iter().map(|p| p.1.clone()).collect();
            let v: Vec<Word> = v.into_iter().map(|p| p.1.clone()).collect();
            report.instances += 1;
            let found = outer.iter().any(|x| {
                !set.contains(x)
                    && u.iter().all(|a| e.edge(x, a) == Some(true))
                    && v.iter().all(|b| e.edge(x, b) == Some(false))
            });
            if found {
                report.satisfied += 1;
            } else if report.missing.len() < 10 {
                report.missing.push((u, v));
            }
        }
    }
    report.rate = report.satisfied as f64 / report.instances.max(1) as f64;
    Ok(report)
}

/// A seeded stream of seeds, one per repetition of a sampled experiment.
pub fn derived_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clopen_normal_form() {
        let a = Word::x();
        let b = Word::y();
        // the pattern set ignores the second coordinate
        let c = Clopen::new(vec![a.clone(), b.clone()], [0b01, 0b11]);
        assert_eq!(c.support(), [a.clone()]);
        assert_eq!(c, Clopen::new(vec![a.clone()], [1]));
        // reordering the support permutes the bits
        assert_eq!(Clopen::new(vec![b.clone(), a.clone()], [0b01]), Clopen::new(vec![a, b], [0b10]));
        assert!(!Clopen::new(vec![Word::x()], [0, 1]).is_nontrivial());
    }

    #[test]
    fn pure_set_points_are_never_fixed() {
        let e = f2_embedding(ClassId::PureSet, 0);
        let cert = freeness_check(&e, 4).unwrap();
        assert!(cert.pass && cert.points_tested == 53);
        assert!(homomorphism_check(&e, 2, 20).is_empty());
    }

    #[test]
    fn cayley_graph_is_invariant() {
        let e = f2_embedding(ClassId::Graph, 7);
        assert_eq!(cayley_edge_invariance(&e, 2, 2).unwrap(), 0);
        let x = Word::x();
        assert_eq!(e.edge(&x, &x), Some(false));
        assert_eq!(e.edge(&Word::identity(), &x), e.edge(&x, &Word::identity()));
    }

    #[test]
    fn identity_neighbour_exists_iff_connection_set_meets_ball() {
        for seed in 0..30 {
            let r = cayley_extension_check(seed, 1, 1).unwrap();
            let meets = ball(1).iter().skip(1).any(|g| in_connection_set(seed, g));
            // instances: U = {1} and V = {1}
            assert_eq!(r.instances, 2);
            let u_ok = !r.missing.iter().any(|(u, _)| u.len() == 1);
            assert_eq!(u_ok, meets);
        }
    }
}
