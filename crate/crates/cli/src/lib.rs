//! File formats and fixtures for the `belyi` command line front end.

pub mod fixtures;
pub mod formats;
