// The book's chapters are plain mdbook Markdown. Including each one as a
// module doc turns its Rust listings into doc-tests, so `cargo test` fails as
// soon as the book and the code drift apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/abelian.md")]
pub mod abelian {}
#[doc = include_str!("../../../book/src/smith.md")]
pub mod smith {}
#[doc = include_str!("../../../book/src/presentations.md")]
pub mod presentations {}
#[doc = include_str!("../../../book/src/composition.md")]
pub mod composition {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/amalgams.md")]
pub mod amalgams {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
