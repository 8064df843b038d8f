#![no_std]

extern crate alloc;

pub mod ambient;
pub mod base;
pub mod chart;
pub mod fixtures;
pub mod geom;
pub mod homeo;
pub mod moves;
pub mod num;
pub mod pairs;
pub mod pl;
pub mod promotion;
pub mod region;
pub mod swindle;
pub mod verify;
