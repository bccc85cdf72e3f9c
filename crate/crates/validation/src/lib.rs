//! Holds the acceptance suite in `tests/acceptance.rs`. Run it with
//! `cargo test -p dea-validation --test acceptance`.
