//! Brauer relations, Tamagawa and regulator quotients, and conditional
//! Selmer-growth certificates for semistable elliptic curves over `Q`.
//!
//! The pipeline: build a small Galois group ([`group`]), pick a Brauer
//! relation in it ([`brauer`]), compute the local reduction data of the
//! curve ([`curve`]) and the decomposition/inertia data of each bad prime
//! ([`field`]), then combine everything into per-place Tamagawa quotients
//! and a [`quotient::GrowthCertificate`].

pub mod app;
pub mod arith;
pub mod brauer;
pub mod curve;
pub mod field;
pub mod group;
pub mod quotient;
pub mod rational;

pub use rational::FactoredRational;
