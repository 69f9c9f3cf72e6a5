//! Acceptance checks for `gaussbeam`. Run with
//! `cargo test -p gaussbeam-validation --test acceptance`.
