//! p-adic Newton polygons and `U_p` slope statistics.
//!
//! Slopes of `U_p` on `S_k(Gamma0(Np))` are read off the `T_p`
//! characteristic polynomial at level `N`: each `T_p` eigenvalue lifts to
//! the two roots of `X^2 - a X + p^{k-1}`, and the p-new part contributes
//! slope `(k-2)/2`. The level-`Np` polynomial is never formed.

pub mod gm;
pub mod multiset;
pub mod polygon;

pub use gm::{
    canonical_json, gm_compare, gm_compare_multisets, gm_predicts_equal, sha256_hex, theorem1_certificate,
    verify_certificate, CaseRecord, Comparison, DichotomyEvidence, DirectEvidence, Evidence, GMInstance, GmOutcome,
    ViolationCertificate,
};
pub use multiset::{
    d_of_alpha, select_engine, slope_report_from_tp_charpoly, slopes_from_tp_polygon, tp_charpoly, up_slope_multiset, Engine, EngineCaps,
    SlopeMultiset, SlopeReport,
};
pub use polygon::{newton_polygon, newton_polygon_of_valuations, NewtonPolygon, Segment};
