//! Property (T) laboratory: the ℓ¹ displacement calculus, the back-and-forth
//! tree that produces a compact Kazhdan set, and free actions of `F₂` on the
//! built-in structures.

mod dist;
mod embed;
mod magnus;
mod report;
mod tree;
mod truncation;
mod word;
#[cfg(test)]
mod tests;

pub use dist::{
    displacement, l1_l2_transfer, marginal_check, random_distribution, random_unit_vector, Distribution,
    InequalityReport, TransferReport, Weight, TOLERANCE,
};
pub use word::{ball, ball_size, Word, LETTERS};
pub use tree::{build_tree, greedy_witness, verify_tree, Certificate, GreedyWitness, PartialAutTree, TreeReport};
pub use truncation::{PartialMap, Point, Truncation, DEFAULT_SEARCH};
pub use magnus::{default_degree, magnus_compare, order_axioms_check, MagnusSeries, OrderAxiomsReport, MAX_DEGREE, MAX_WORD};
pub use embed::{
    cayley_edge_invariance, cayley_extension_check, derived_seeds, f2_embedding, freeness_check, homomorphism_check,
    Clopen, ExtensionReport, F2Embedding, FreenessCertificate, Payload, SamplePoint,
};
pub use report::{default_word_length, kazhdan_report, KazhdanReport, DEFAULT_TREE_DEPTH};
pub(crate) use report::random_subset;
