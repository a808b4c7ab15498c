//! Python bindings for skeletrans (populated after the core crate).
