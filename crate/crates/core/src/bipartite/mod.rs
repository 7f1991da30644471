//! Pairs of spins: product coherent states, partial transpose, product-grid
//! linear programs and boundary scans in a plane of directions.

mod boundary;
mod coeffs;
mod scan;
mod state;

pub use boundary::{
    bipartite_boundary_kappa, bipartite_decide, BipartiteDecision, BipartiteOptions, ProductAtom, ProductGrid, ProductMixture,
};
pub use coeffs::{
    bipartite_multipole, bipartite_p_coeffs, bipartite_real_p_coefficients, bipartite_rho_coeffs,
    from_bipartite_multipole, BipartiteMultipole,
};
pub use scan::{scan2d, ScanOptions, ScanResult, ScanRow, SCAN_CSV_HEADER};
pub use state::{
    kron_state, partial_trace_a, partial_trace_b, partial_trace_witness, partial_transpose, ppt_check, ppt_kappa,
    product_coherent, BipartiteState, PartialTraceVerdict, Subsystem,
};
