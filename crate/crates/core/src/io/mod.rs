//! Data ingestion and emission: CSV matrices and label files, column scaling,
//! binary PPM images, and pixel/matrix conversion.

mod ppm;
mod raster;
mod scaling;
mod table;

pub use ppm::{decode_ppm, encode_ppm, read_ppm, write_ppm};
pub use raster::{image_to_matrix, keep_cluster, recolor, to_grayscale, RasterImage};
pub use scaling::{scale_by_std, ColumnScaling};
pub use table::{
    parse_csv_matrix, read_csv_matrix, read_labels_csv, write_labels_csv, write_matrix_csv,
    write_rows_csv,
};
