//! Workbench for the labeled interpretability logic FIL.
//!
//! * [`formula`]: syntax, parsing and printing.
//! * [`kernel`]: line-by-line auditing of Hilbert-style derivations.
//! * [`series`]: the slim and broad families of principles.
//! * [`synth`]: construction of kernel-checked derivations.
//! * [`veltman`]: finite Veltman models and countermodel search.
//! * [`cli`]: the `fil` command line.

pub mod cli;
pub mod formula;
pub mod kernel;
pub mod series;
pub mod synth;
pub mod veltman;
