pub mod catalog;
pub mod cli;
pub mod crystal;
pub mod error;
pub mod golden;
pub mod homsearch;
pub mod intlin;
pub mod kernelab;
pub mod perms;
pub mod reptheory;
pub mod twisted;
pub mod words;

pub use error::{Error, Result};
