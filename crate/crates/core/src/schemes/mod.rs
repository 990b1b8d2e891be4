//! Constructive schemes: acyclic-subgraph covers, cyclic balancing and
//! separation through covering codes.

mod ais;
mod covering_code;
mod cyclic;

pub use ais::{ais_cover_code, reorder_for_subset, t_subset_cover, AisCover};
pub use covering_code::{
    find_covering_code, separation_code, sphere_covering_holds, CoveringCode, DEFAULT_COVERING_BUDGET,
};
pub use cyclic::cyclic_balanced_code;
