//! Narrative guide to the crate, one chapter per module, kept runnable.
//!
//! Each chapter below embeds a page of the rendered book (the `book/`
//! directory at the repository root, built with mdbook). The code blocks in
//! those pages compile and run as doc-tests, so the guide cannot drift from
//! the library.
