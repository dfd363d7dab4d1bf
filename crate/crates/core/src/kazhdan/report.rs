use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dist::{displacement, random_distribution};
use super::embed::{f2_embedding, freeness_check, SamplePoint};
use super::tree::{build_tree, greedy_witness, verify_tree};
use super::truncation::{display, Point, DEFAULT_SEARCH};
use super::word::Word;
use crate::config::Limits;
use crate::error::Result;
use crate::finstruct::{self, ClassId};

#[derive(Debug, Clone, Serialize)]
pub struct FreenessSummary {
    #[serde(rename = "L")]
    pub word_length: usize,
    pub points_tested: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeSummary {
    pub depth: usize,
    pub conditions_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DisplacementTrials {
    pub count: usize,
    #[serde(serialize_with = "display")]
    pub min_value: Point,
}

#[derive(Debug, Clone, Serialize)]
pub struct KazhdanReport {
    pub class: ClassId,
    #[serde(rename = "Q")]
    pub q: [Word; 2],
    pub freeness: FreenessSummary,
    /// Only for classes without algebraicity.
    pub tree: Option<TreeSummary>,
    pub displacement_trials: DisplacementTrials,
}

/// Word length used by the freeness check: longer for classes whose sample
/// points are single words.
pub fn default_word_length(class: ClassId) -> usize {
    match class {
        ClassId::VectorSpace { .. } | ClassId::BooleanAlgebra => 4,
        _ => 8,
    }
}

pub const DEFAULT_TREE_DEPTH: usize = 6;

/// Freeness of the `F₂` embedding and, for relational classes without
/// algebraicity, the tree with greedy displacements of random distributions on
/// `A_depth`. Other classes report `max_{g ∈ Q} ‖g·f − f‖₁` on random
/// distributions over sample points instead.
pub fn kazhdan_report(
    class: ClassId,
    depth: usize,
    trials: usize,
    word_length: usize,
    limits: &Limits,
) -> Result<KazhdanReport> {
    let embedding = f2_embedding(class, limits.seed);
    let cert = freeness_check(&embedding, word_length)?;
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    let mut min_value = Point::from(2);
    let c = finstruct::class(class);
    let tree = if c.is_relational() && c.has_no_algebraicity() {
        let mut tree = build_tree(class, depth, limits.seed, DEFAULT_SEARCH)?;
        let ok = verify_tree(&mut tree).conditions_ok();
        let a = tree.enumeration(depth);
        for _ in 0..trials {
            let points = random_subset(&mut rng, &a);
            let f = random_distribution(&mut rng, &points, 20);
            min_value = min_value.min(greedy_witness(&mut tree, &f)?.displacement);
        }
        Some(TreeSummary { depth, conditions_ok: ok })
    } else {
        let sample = embedding.sample_points();
        let q = embedding.kazhdan_set();
        for _ in 0..trials {
            let picks: Vec<SamplePoint> = (0..6).map(|_| sample[rng.gen_range(0..sample.len())].clone()).collect();
            let mut points = picks;
            points.sort();
            points.dedup();
            let f = random_distribution(&mut rng, &points, 20);
            let mut best = Point::from(0);
            for g in &q {
                best = best.max(displacement(|p: &SamplePoint| Some(embedding.act(g, p)), &f)?);
            }
            min_value = min_value.min(best);
        }
        None
    };
    Ok(KazhdanReport {
        class,
        q: cert.q.clone(),
        freeness: FreenessSummary { word_length, points_tested: cert.points_tested, pass: cert.pass },
        tree,
        displacement_trials: DisplacementTrials { count: trials, min_value },
    })
}

/// A nonempty random subset, each point kept with probability 1/2.
pub(crate) fn random_subset<R: Rng>(rng: &mut R, points: &[Point]) -> Vec<Point> {
    loop {
        let out: Vec<Point> = points.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if !out.is_empty() {
            return out;
        }
    }
}
