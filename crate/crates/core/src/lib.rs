pub mod cli;
pub mod dense_coding;
pub mod pauli;
pub mod protocol;
pub mod smp;
pub mod state;
