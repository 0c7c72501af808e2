//! Twin smooth integers through Pell equations.
//!
//! A pair of consecutive integers (m, m+1) whose product is B-smooth
//! corresponds, via m = (x-1)/2, to a solution of x^2 - 2 Delta y^2 = 1
//! with Delta a squarefree B-smooth coefficient and y B-smooth. This crate
//! implements that correspondence end to end:
//!
//! * [`arith`] — prime sieving, trial-division smoothness checks, a
//!   segmented sieve for twin smooth ranges, Miller-Rabin primality;
//! * [`pell`] — continued-fraction solving with a size cutoff and fast
//!   stepping between solution indices;
//! * [`poly`] — the solution polynomials p_n, u_n, v_n and the size bounds
//!   they give;
//! * [`lehmer`] — the bijection between coefficient triples and twin pairs,
//!   and complete enumeration for small bounds;
//! * [`search`] — interval-targeted search strategies and the pairwise
//!   combination expander;
//! * [`cli`] — batch execution with JSONL results, checkpoint/resume and
//!   shard partitioning, behind the `twinsmooth` binary.

pub mod arith;
pub mod cli;
pub mod lehmer;
pub mod pell;
pub mod poly;
pub mod search;
