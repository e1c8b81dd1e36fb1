//! Independent checks: linear codes over small fields, exhaustive search
//! over atom configurations, and nullity redistribution.

pub mod code;
pub mod gf;
pub mod redistribute;
pub mod search;

pub use code::{
    check_code_matroid_agreement, code_min_distance, matroid_of_code, AgreementReport, CodeError,
    LinearCode,
};
pub use gf::GaloisField;
pub use redistribute::{perfect_by_redistribution, redistribution_trace, RedistributeError};
pub use search::{
    check_tightness, enumerate_configs, search_dmax, SearchError, SearchLimits, SearchResult,
    TightnessVerdict,
};
