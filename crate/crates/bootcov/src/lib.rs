//! Command-line front end: reproduces the coverage/length tables, curves,
//! surfaces and calibration workflows as CSV files, one run manifest per
//! output.

pub mod compare;
pub mod csvio;
pub mod curves;
pub mod manifest;
pub mod surface;
pub mod tables;
pub mod validate;
