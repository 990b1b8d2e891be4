//! Covering the receivers with component codes: catalogs of per-subset
//! codes and the integer and fractional programs that pick among them.

mod components;
mod programs;

pub use components::{
    cycle_component, mds_parity_encoder, minrank_component, partial_clique_component, vectorize_component, CatalogKind,
    ComponentCatalog, ComponentCode, Recipe, CATALOG_LIMIT,
};
pub use programs::{covering_ilp, covering_lp, exhaustive_partition_oracle, materialize, CoverSolution};
