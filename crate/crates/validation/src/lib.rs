//! Acceptance suite for `grasscs-core`; see `tests/acceptance.rs`.
