//! Structural queries on signed graphs: blocks, cycles, unbalanced thetas,
//! good and usable cycles, fragility, fish recognition, small edge cuts.

mod blocks;
mod cuts;
mod cycles;
mod fish;
mod good;
mod theta;
mod three;
mod well_behaved;

pub use blocks::{block_cut_tree, Block, BlockCutTree};
pub use cuts::{
    cuts_of_size, doubly_straddled_four_cut, straddled_three_cut, straddles, EdgeCut,
};
pub use cycles::{
    enumerate_cycles, find_negative_cycle, find_two_disjoint_negative_cycles, CycleEnumeration,
    CycleIndex, DisjointPair,
};
pub use fish::{recognize_fish, FishCertificate};
pub use good::{
    find_good_cycle, find_good_theta_pair, find_usable_cycle, good_cycles, is_fragile,
    GeneralizedCycle, GoodSearch, GoodThetaPair,
};
pub use theta::{brute_force_unbalanced_theta, contains_unbalanced_theta, has_unbalanced_theta, ThetaSubgraph};
pub use three::{cycle_through_three_vertices, ThreeVertexOutcome, WMPartition};
pub use well_behaved::{is_well_behaved, WELL_BEHAVED_MAX};

/// Default cap on enumerated cycles.
pub const CYCLE_LIMIT: usize = 2_000_000;
