//! Exact computations on the Berkovich projective line over valued fields:
//! Gauss valuations, the ball/tree model of points, geodesics, convex hulls,
//! deformation retractions, tropical piecewise-linear functions and skeleta.

pub mod berkline;
pub mod cli;
pub mod fields;
pub mod linear;
pub mod trees;
pub mod tropical;
pub mod valgrp;
