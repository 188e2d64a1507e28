//! Closed-form positive-frequency wave packets for the Dirac equation, the
//! discrete-time walk and the continuous-time walk, each with a
//! direct-quadrature oracle of its Fourier representation.

mod ctqw;
mod dirac;
mod dtqw;

pub use ctqw::{ctqw_packet, ctqw_packet_oracle, CtqwPacket, CtqwPacketParams};
pub use dirac::{
    dirac_normalization, dirac_packet, dirac_packet_oracle, DiracPacket, DiracPacketParams,
};
pub use dtqw::{
    dtqw_normalization, dtqw_packet, dtqw_packet_bessel, dtqw_packet_oracle, in_function,
    DtqwPacket, DtqwPacketParams, InVariant,
};
