pub mod analyzer;
pub mod cmap;
pub mod patterns;
pub mod pipeline;
pub mod repair;
pub mod runtime;
pub mod skeleton;
