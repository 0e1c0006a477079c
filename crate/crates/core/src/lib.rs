pub mod analysis;
pub mod cone;
pub mod exact;
pub mod report;
pub mod spectral;
pub mod series;
pub mod spec;
pub mod unipotent;
