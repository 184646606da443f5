pub mod analysis;
pub mod bits;
pub mod channel;
pub mod codec;
pub mod decode;
pub mod harness;
pub mod io;
