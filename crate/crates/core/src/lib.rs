pub mod exponents;
pub mod fft;
pub mod grid;
pub mod lorentz;
pub mod spectral;
pub mod sim;
pub mod cli;

/// Any failure of the library, by layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Exponent(#[from] exponents::ExponentError),
    #[error(transparent)]
    Grid(#[from] grid::GridError),
    #[error(transparent)]
    Lorentz(#[from] lorentz::LorentzError),
    #[error(transparent)]
    Spectral(#[from] spectral::SpectralError),
    #[error(transparent)]
    Sim(#[from] sim::SimError),
}
