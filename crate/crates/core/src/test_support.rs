//! Shared fixtures for the unit-test modules.

use crate::catalog::CatalogBuilder;
use std::sync::OnceLock;

/// One catalog builder (both full sweeps) shared across test modules.
pub(crate) fn builder() -> &'static CatalogBuilder {
    static BUILDER: OnceLock<CatalogBuilder> = OnceLock::new();
    BUILDER.get_or_init(|| CatalogBuilder::new().expect("sweeps succeed"))
}
