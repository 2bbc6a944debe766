use nmtc_core::analytics::*;
use nmtc_core::phy::coding::{decode_tail_biting, encode_tail_biting};
use nmtc_core::{AccessRequestMessage, ChannelClass, RachConfig, RachGrid, RadioParams};
use proptest::prelude::*;

fn class() -> impl Strategy<Value = ChannelClass> {
    prop::sample::select(ChannelClass::ALL.to_vec())
}

fn grid_for(class: ChannelClass, hop_dq: usize) -> RachGrid {
    let cfg = RachConfig {
        hop_dq,
        ..RachConfig::for_class(class, 180e3, 60)
    };
    RachGrid::build(180e3, 60, &cfg).unwrap()
}

proptest! {
    #[test]
    fn message_word_and_bits_round_trip(id in 0u16..1024, req in 0u8..16) {
        let m = AccessRequestMessage::new(id, req).unwrap();
        prop_assert_eq!(AccessRequestMessage::from_word(m.to_word()).unwrap(), m);
        prop_assert_eq!(AccessRequestMessage::from_bits(&m.to_bits()).unwrap(), m);
        prop_assert_eq!(m.access_id(), id);
        prop_assert_eq!(m.resource_request(), req);
    }

    #[test]
    fn single_bit_flip_breaks_crc(id in 0u16..1024, req in 0u8..16, bit in 0u32..24) {
        let m = AccessRequestMessage::new(id, req).unwrap();
        prop_assert!(AccessRequestMessage::from_word(m.to_word() ^ (1 << bit)).is_err());
    }

    #[test]
    fn tail_biting_clean_llrs_decode(bits in prop::collection::vec(0u8..2, 24)) {
        let coded = encode_tail_biting(&bits);
        let llr: Vec<f64> = coded.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect();
        prop_assert_eq!(decode_tail_biting(&llr, bits.len()), bits);
    }

    #[test]
    fn collision_probabilities_are_probabilities(pool in 1usize..2000, n in 1usize..50) {
        let p = p_channel_collision(pool, n);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(p_channel_collision(pool, n + 1) >= p - 1e-15);
        prop_assert!(p_channel_collision(pool + 1, n) <= p + 1e-15);
        let t = p_total_collision(p, p_id_collision(N_ID, n));
        prop_assert!(t >= p - 1e-15 && t <= 1.0);
    }

    #[test]
    fn excess_time_falls_with_bandwidth(c in class(), w in 1e2f64..1e6, k in 1.01f64..10.0) {
        let r = RadioParams::default();
        let a = delta_tau(w, c, &r);
        let b = delta_tau(w * k, c, &r);
        prop_assert!(a > 0.0 && b > 0.0 && b < a);
    }

    #[test]
    fn effective_bandwidth_is_a_floor(c in class(), th in 0.02f64..0.5, grid in 1e2f64..5e3) {
        let r = RadioParams::default();
        let exact = effective_bandwidth_exact_hz(c, &r, th).unwrap();
        let w = effective_bandwidth_hz(c, &r, th, grid).unwrap();
        let steps = w / grid;
        prop_assert!((steps - steps.round()).abs() < 1e-9);
        prop_assert!(w <= exact * (1.0 + 1e-9) || w == grid);
        prop_assert!(w + grid > exact);
        prop_assert!((delta_tau(exact, c, &r) - th).abs() < 1e-9);
    }

    #[test]
    fn optimum_is_minimal_and_divides(c in class(), n in 2usize..15, l in 1usize..40) {
        let r = RadioParams::default();
        let search = SearchGrid::default();
        let sol = optimize_config_with(c, 180e3, n, l, &r, &search).unwrap();
        let chans = 180e3 / sol.w_opt_hz;
        prop_assert!((chans - chans.round()).abs() < 1e-9);
        prop_assert_eq!(sol.n_rach, l * chans.round() as usize);
        prop_assert!(sol.w_opt_hz <= sol.w_effective_hz);
        let (_, pts) = penalty_sweep(c, 180e3, n, l, &r, &search).unwrap();
        for p in pts {
            prop_assert!(sol.delta_tau_c <= p.delta_tau_c + 1e-12);
        }
    }

    #[test]
    fn more_slots_never_hurt(c in class(), n in 2usize..15, l in 1usize..40) {
        let r = RadioParams::default();
        let s = SearchGrid::default();
        let a = optimize_config_with(c, 180e3, n, l, &r, &s).unwrap();
        let b = optimize_config_with(c, 180e3, n, l + 1, &r, &s).unwrap();
        prop_assert!(b.delta_tau_c <= a.delta_tau_c + 1e-12);
    }

    #[test]
    fn mean_time_at_least_one_tti(tti in 1e-3f64..1.0, pc in 0.0f64..0.9, pe in 0.0f64..0.09) {
        prop_assert!(mean_tx_time_s(tti, pc, pe) >= tti);
    }

    #[test]
    fn hop_is_an_involution_without_overlap(c in class(), dq in 1usize..=9) {
        let g = grid_for(c, dq);
        let n = g.num_subcarriers();
        for k in 0..n {
            prop_assert!(g.hop_partner(k) < n);
            prop_assert_eq!(g.hop_partner(g.hop_partner(k)), k);
            prop_assert!(g.hop_offset(k).unsigned_abs() <= dq);
        }
        for group in 0..2 {
            let mut used = vec![false; n];
            for ch in 0..g.channels_per_slot() {
                for tone in 0..g.subcarriers_per_channel() {
                    let sc = g.subcarrier(ch, tone, group);
                    prop_assert!(!used[sc], "subcarrier {} reused", sc);
                    used[sc] = true;
                }
            }
        }
    }
}

#[test]
fn nominal_grids() {
    let expect = [(60, 1, 664), (20, 3, 264), (6, 12, 56), (2, 36, 16)];
    for (c, (chans, l, n_ofdm)) in ChannelClass::ALL.into_iter().zip(expect) {
        let g = grid_for(c, 9);
        assert_eq!(g.channels_per_slot(), chans, "{c}");
        assert_eq!(g.tdm_multiplicity(), l, "{c}");
        assert_eq!(g.n_ofdm(), n_ofdm, "{c}");
        assert_eq!(g.n_rach(), chans * l);
        assert!(g.tti_s() <= c.nominal_tti_s() * 1.05);
        assert!(g.timing_estimable());
    }
}
