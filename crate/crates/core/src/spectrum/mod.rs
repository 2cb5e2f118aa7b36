//! Range scans, attained-value spectra, tail certificates and surveys.

mod cache;
mod certificate;
mod enumerate;
mod survey;
mod table;
mod values;

pub use cache::{
    cache_file_name, load_cached, load_table, read_table, save_table, store_cached, write_table,
    CACHE_DIR_ENV, CACHE_MAGIC, CACHE_VERSION,
};
pub use certificate::{
    certify_index_bound, certify_scan_bound, certify_scan_bound_within, product_lower_bound,
    ChainCheck, Envelope, ExplicitConstants, TailCertificate, DEFAULT_SEARCH_MAX,
};
pub use enumerate::{
    check_pruning_order, fold_levels_with_psi_at_most, for_each_level_with_psi_at_most,
    LevelState,
};
pub use survey::{
    delta_bound, delta_value_survey, exceptional_census, CensusReport, DeltaSurvey,
    SurveyCheckpoint,
};
pub use table::{sieve_dimensions, DimensionTable};
pub(crate) use table::level_values;
pub use values::{
    build_spectrum, ceiling_for, missing_values, Method, ValueSpectrum, AUTO_LEVEL_SCAN_MAX,
};
