pub mod ampleness;
pub mod blowdown;
pub mod config;
pub mod exact;
pub mod geometry;
pub mod lattice;
pub mod report;
pub mod swcert;
pub mod wahl;
