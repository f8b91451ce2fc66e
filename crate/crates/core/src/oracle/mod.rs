//! Brute-force ground truth: exhaustive flow search, instance generators and
//! named instances.

mod generate;
mod named;
mod search;
mod structures;

pub use generate::{generate_3ec_signed, generate_cubic_3ec_signed, GENERATION_ATTEMPTS};
pub use named::{
    bouchet_petersen_probe, fish, k4, named_instance, petersen, petersen_class_masks, prism_neg, triple_edge,
    BouchetWitness,
};
pub use search::{brute_flow_admissible, extend_flow, nz_kflow_exists, OracleVerdict, SearchBudget, ADMISSIBILITY_K};
pub use structures::{cubic_structures, subcubic_structures};
