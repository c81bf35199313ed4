//! Exact tools for the configuration equations of a group with a generator
//! string and a partition. A normality certificate for a pair of
//! (0,1)-matrices is searched and checked here, the homogeneous alternative
//! is solved over the rationals, and a normal subsystem is turned into a
//! decomposition plan whose transfer diagram bounds the Tarski number.

pub mod cli;
pub mod config;
pub mod decomp;
pub mod error;
pub mod gordan;
pub mod grouporacle;
pub mod intmat;
pub mod io;
pub mod normality;
pub mod word;

pub use error::{Error, Result};
