use crate::contraction::ContractionError;
use crate::network::NetworkError;
use crate::schmidt::SchmidtError;
use crate::tensor::TensorError;
use crate::tiles::TileError;
use crate::walk::WalkError;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Schmidt(#[from] SchmidtError),
    #[error(transparent)]
    Tile(#[from] TileError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Contraction(#[from] ContractionError),
}
