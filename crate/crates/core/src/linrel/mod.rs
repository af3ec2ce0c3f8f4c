//! Linear algebra over `Q` for relations and dimensions of bracket spaces.

pub mod dims;
pub mod matrix;
pub mod search;

pub use dims::{
    dim_lower_bound, dimension_report, dims_from_dprime, fil_lower_bounds, gr_from_fil, recommended_order, Certainty,
    DimCell, DimTargets, DimensionReport, DimensionTable, Kind, Space,
};
pub use matrix::{EchelonBasis, ExactMatrix};
pub use search::{
    conjecture_series_check, conjectured_dprime_series, default_pool_order, homogeneous_relation_search, proven_relation_pool,
    relation_search, RelationPool,
};
