//! Navigation for four-wheel independently steered robots whose steering
//! cannot turn all the way around.
//!
//! The steering limits carve body-velocity space into regions separated by
//! discontinuity planes; crossing one forces a wheel flip. [`geometry`] builds
//! that arrangement, [`planner`] is a dynamic-window planner that knows about
//! it, [`controller`] executes commands at the wheel level and [`sim`] closes
//! the loop in occupancy-grid worlds.

pub mod cli;
pub mod controller;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod planner;
pub mod sim;

pub use error::{Error, Result};
