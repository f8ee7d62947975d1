pub mod denumerant;
pub mod factorization;
pub mod geometry;
pub mod graphs;
pub mod mask;
pub mod poset;
pub mod quasipoly;
pub mod semigroup;

pub use denumerant::{count_factorizations, count_factorizations_subset, DenumerantTable};
pub use factorization::{direct_trade, factorizations, Factorization, Trade, TradeError};
pub use geometry::{
    cube_face_lattice, principal_ideal_cube_iso, projective_complex_check, signed_covectors,
    zonotope_iso, CubeFace, GeometryError, SignVector,
};
pub use graphs::{
    betti_elements, connected_components, edge_count_support_closed, edge_count_trade_closed,
    is_presentation, minimal_presentation, support_graph, trade_graph, FactorizationGraph,
    GraphError, GraphKind, Presentation,
};
pub use mask::Mask;
pub use poset::{enumerate_pds, mobius_closed_form, PosetDS, PosetError, SupportPair};
pub use quasipoly::{
    fit, minimal_period, predicted_leading_coefficient, verify_degree_period_claims, ClaimReport,
    CountKind, FitError, OracleRoute, Quasipolynomial,
};
pub use semigroup::{NumericalSemigroup, SemigroupError};
