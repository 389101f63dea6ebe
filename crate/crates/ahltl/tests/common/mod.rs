#![allow(dead_code)]

pub mod games;
pub mod ltl;
pub mod systems;
