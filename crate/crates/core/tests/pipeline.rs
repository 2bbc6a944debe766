//! Transmitter through channel to receiver using only the public API.

use nmtc_core::channel::{apply_awgn, apply_offsets, impair_device};
use nmtc_core::phy::{superpose, transmit_access};
use nmtc_core::receiver::{decode_all_channels, decode_channel, extract_symbols};
use nmtc_core::{AccessRequestMessage, ChannelClass, Fading, ImpairmentProfile, RachConfig, RachGrid};
use proptest::prelude::*;

const CELL: u16 = 5;

fn grid(class: ChannelClass) -> RachGrid {
    RachGrid::build(180e3, 60, &RachConfig::for_class(class, 180e3, 60)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn noiseless_decode_recovers_message_and_offsets(
        class in prop::sample::select(vec![ChannelClass::Cc2, ChannelClass::Cc3, ChannelClass::Cc4]),
        id in 0u16..1024,
        req in 0u8..16,
        ch_seed in 0usize..1000,
        dt in 0.0f64..35e-6,
        df in -50.0f64..50.0,
    ) {
        let g = grid(class);
        let ch = ch_seed % g.channels_per_slot();
        let msg = AccessRequestMessage::new(id, req).unwrap();
        let sig = transmit_access(&msg, &g, ch, CELL).unwrap();
        let rx = extract_symbols(&apply_offsets(&sig, dt, df), &g);
        let r = decode_channel(&rx, &g, ch, CELL).unwrap();
        prop_assert_eq!(r.message, Some(msg));
        prop_assert!((r.est_delta_f_hz - df).abs() < 0.5);
        let applied = (dt * g.sample_rate_hz()).round() / g.sample_rate_hz();
        prop_assert!((r.est_delta_t_s.unwrap() - applied).abs() < 1e-7);
    }
}

#[test]
fn two_devices_on_separate_channels_both_decode() {
    let g = grid(ChannelClass::Cc3);
    let a = AccessRequestMessage::new(17, 3).unwrap();
    let b = AccessRequestMessage::new(900, 12).unwrap();
    let prof = |dt, df| ImpairmentProfile {
        delta_t_s: dt,
        delta_f_hz: df,
        fading: Fading::Flat,
        snr_db: 20.0,
    };
    let sa = impair_device(&transmit_access(&a, &g, 1, CELL).unwrap(), &prof(10e-6, 20.0), 1);
    let sb = impair_device(&transmit_access(&b, &g, 4, CELL).unwrap(), &prof(30e-6, -40.0), 2);
    let sum = superpose(&[(sa, 0.0, 1.0), (sb, 0.0, 1.0)]);
    let re_power = 1.0 / g.subcarriers_per_channel() as f64;
    let rx = extract_symbols(&apply_awgn(&sum, 20.0, re_power, 3), &g);
    let found: Vec<_> = decode_all_channels(&rx, &g, CELL)
        .into_iter()
        .filter_map(|r| r.message.map(|m| (r.channel_index, m)))
        .collect();
    assert_eq!(found, vec![(1, a), (4, b)]);
}

#[test]
fn other_cell_is_rejected() {
    let g = grid(ChannelClass::Cc4);
    let msg = AccessRequestMessage::new(1, 1).unwrap();
    let rx = extract_symbols(&transmit_access(&msg, &g, 0, CELL).unwrap(), &g);
    assert!(decode_channel(&rx, &g, 0, CELL + 1).unwrap().message.is_none());
}
