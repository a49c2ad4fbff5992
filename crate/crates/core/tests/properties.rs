mod common;

use proptest::prelude::*;
use rlefeat::entropy::{self, ceq_line, row_transitions, LogBase, TransitionSummary};
use rlefeat::histograms::{self, RunKind};
use rlefeat::profiles::{self, stream_columns};
use rlefeat::*;

fn image() -> impl Strategy<Value = BitonalImage> {
    (1usize..24, 1usize..40)
        .prop_flat_map(|(h, w)| (Just(h), Just(w), prop::collection::vec(0u8..=1, h * w)))
        .prop_map(|(h, w, px)| BitonalImage::new(h, w, px).unwrap())
}

proptest! {
    #[test]
    fn codec_round_trip(img in image()) {
        let doc = encode_rle(&img);
        prop_assert_eq!(&decode_rle(&doc).unwrap(), &img);
        prop_assert_eq!(&read_rle_file(&write_rle_file(&doc)).unwrap(), &doc);
        prop_assert_eq!(&read_pbm(&write_pbm(&img)).unwrap(), &img);
    }

    #[test]
    fn canonical_runs(img in image()) {
        let doc = encode_rle(&img);
        for (row, pixels) in doc.rows().iter().zip(img.rows()) {
            prop_assert!(row.runs()[1..].iter().all(|&r| r > 0));
            prop_assert!(row.len() <= img.width() + 1);
            prop_assert_eq!(row.pixel_sum(), img.width() as u128);
            // adjacent runs differ in colour by construction, so re-encoding the
            // expansion must give the same list
            let mut expanded = Vec::new();
            row.expand_into(&mut expanded);
            prop_assert_eq!(&expanded[..], pixels);
        }
        for padded in padded_matrix_view(&doc) {
            prop_assert_eq!(padded.iter().sum::<usize>(), img.width());
        }
    }

    #[test]
    fn profile_conservation(img in image()) {
        let doc = encode_rle(&img);
        let rows = profiles::row_profile_compressed(&doc);
        let cols = profiles::column_profile_compressed(&doc);
        prop_assert_eq!(&rows, &profiles::row_profile_oracle(&img));
        prop_assert_eq!(&cols, &profiles::column_profile_oracle(&img));
        prop_assert_eq!(rows.total(), img.black_pixel_count());
        prop_assert_eq!(cols.total(), img.black_pixel_count());
        prop_assert!(rows.values.iter().all(|&v| v <= img.width()));
        prop_assert!(cols.values.iter().all(|&v| v <= img.height()));

        let mut calls = 0;
        let mut pops = Vec::new();
        stream_columns(&doc, |c, bits| {
            calls += 1;
            pops.push(bits.iter().filter(|&&b| b == 1).count());
            assert_eq!(bits.len(), img.height());
            assert!(bits.iter().enumerate().all(|(r, &b)| b == img.get(r, c)));
        });
        prop_assert_eq!(calls, img.width());
        prop_assert_eq!(pops, cols.values);
    }

    #[test]
    fn histogram_mass_and_blank_lines(img in image()) {
        let doc = encode_rle(&img);
        let black = histograms::black_run_histogram(&doc);
        let white = histograms::white_run_histogram(&doc);
        let combined = histograms::combined_run_histogram(&doc);
        prop_assert!(!black.counts.contains_key(&0) && !white.counts.contains_key(&0));
        prop_assert_eq!(black.pixel_total(), img.black_pixel_count() as u128);
        prop_assert_eq!(
            black.pixel_total() + white.pixel_total(),
            (img.height() * img.width()) as u128
        );
        prop_assert_eq!(&combined, &black.merged(&white, RunKind::Combined));
        prop_assert_eq!(&black, &histograms::run_histogram_oracle(&img, RunKind::Black));
        prop_assert_eq!(&white, &histograms::run_histogram_oracle(&img, RunKind::White));
        let zeros = profiles::row_profile_compressed(&doc).values.iter().filter(|&&v| v == 0).count();
        prop_assert_eq!(histograms::blank_line_count(&doc), zeros);
    }

    #[test]
    fn log_bins_preserve_frequency(
        counts in prop::collection::btree_map(1usize..100_000, 1u64..50, 0..40),
        bins in 2usize..=histograms::MAX_LOG_BINS,
    ) {
        let hist = histograms::RunHistogram { kind: RunKind::Black, counts };
        let log = histograms::log_scale_histogram(&hist, bins).unwrap();
        prop_assert_eq!(log.bins.len(), bins);
        prop_assert_eq!(log.frequencies().iter().sum::<u64>(), hist.frequency_total());
        // bins tile [1, inf)
        prop_assert_eq!(log.bins[0].lower, 1);
        for pair in log.bins.windows(2) {
            prop_assert_eq!(pair[0].upper.unwrap() + 1, pair[1].lower);
        }
        prop_assert!(log.bins.last().unwrap().upper.is_none());
        // each key lands in the bin whose edges contain it
        for (&len, &f) in &hist.counts {
            let bin = log.bins.iter().find(|b| b.lower <= len as u64 && b.upper.is_none_or(|u| len as u64 <= u)).unwrap();
            prop_assert!(bin.frequency >= f);
        }
    }

    #[test]
    fn transitions_interleave(img in image()) {
        let doc = encode_rle(&img);
        for (row, pixels) in doc.rows().iter().zip(img.rows()) {
            let t = row_transitions(row, img.width());
            let (pos, neg) = common::scan_transitions(pixels);
            prop_assert_eq!(&t.pos_positions, &pos);
            prop_assert_eq!(&t.neg_positions, &neg);
            prop_assert!(t.pos_count().abs_diff(t.neg_count()) <= 1);
            let mut merged: Vec<(usize, bool)> = pos.iter().map(|&p| (p, true)).chain(neg.iter().map(|&p| (p, false))).collect();
            merged.sort();
            for pair in merged.windows(2) {
                prop_assert!(pair[0].0 < pair[1].0);
                prop_assert!(pair[0].1 != pair[1].1);
            }
            if let Some(first) = merged.first() {
                prop_assert!(first.1, "first transition must be 0->1");
            }
            prop_assert!(merged.iter().all(|&(p, _)| (1..=img.width()).contains(&p)));
        }
    }

    #[test]
    fn ceq_bounds_and_seq_finite(img in image()) {
        let doc = encode_rle(&img);
        let ceq = entropy::ceq_horizontal(&doc, LogBase::TWO);
        for l in &ceq.per_line {
            prop_assert!((0.0..=1.0).contains(&l.positive_part));
            prop_assert!((0.0..=1.0).contains(&l.negative_part));
            prop_assert_eq!(l.total, l.positive_part + l.negative_part);
        }
        prop_assert!(ceq.document_total >= 0.0 && ceq.document_total <= 2.0 * img.height() as f64);
        for r in [entropy::seq_horizontal(&doc, LogBase::TWO), entropy::seq_vertical(&doc, LogBase::TWO)] {
            prop_assert!(r.per_line.iter().all(|l| l.positive_part.is_finite() && l.negative_part.is_finite()));
        }
        prop_assert!(common::rel_close(
            ceq.document_total,
            common::ceq_total_base2(&common::pixel_rows(&img)),
            1e-12
        ));
        prop_assert!(common::rel_close(
            entropy::seq_horizontal(&doc, LogBase::TWO).document_total,
            common::seq_total_base2(&common::pixel_rows(&img)),
            1e-12
        ));
    }

    #[test]
    fn ceq_swapping_counts_swaps_parts(pos in 0usize..20, neg in 0usize..20, extra in 1usize..30) {
        let len = pos.max(neg) + extra;
        let t = TransitionSummary { pos_positions: (1..=pos).collect(), neg_positions: (1..=neg).collect(), line_length: len };
        let swapped = TransitionSummary { pos_positions: t.neg_positions.clone(), neg_positions: t.pos_positions.clone(), line_length: len };
        let (a, b) = ceq_line(&t, LogBase::TWO).unwrap();
        let (c, d) = ceq_line(&swapped, LogBase::TWO).unwrap();
        prop_assert_eq!((a, b), (d, c));
    }

    #[test]
    fn ceq_complement_when_counts_swap(img in image()) {
        let comp = img.complement();
        for (line, cline) in img.rows().zip(comp.rows()) {
            let t = TransitionSummary::from_pixels(line);
            let ct = TransitionSummary::from_pixels(cline);
            if line.len() < 2 || (t.pos_count(), t.neg_count()) != (ct.neg_count(), ct.pos_count()) {
                continue;
            }
            let (a, b) = ceq_line(&t, LogBase::TWO).unwrap();
            let (c, d) = ceq_line(&ct, LogBase::TWO).unwrap();
            let mut x = [a, b];
            let mut y = [c, d];
            x.sort_by(f64::total_cmp);
            y.sort_by(f64::total_cmp);
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn vertical_is_horizontal_of_transpose(img in image(), base in prop::sample::select(vec![2.0, std::f64::consts::E, 10.0])) {
        let base = LogBase::new(base).unwrap();
        let doc = encode_rle(&img);
        let tdoc = encode_rle(&img.transpose());
        let pairs = [
            (entropy::ceq_vertical(&doc, base), entropy::ceq_horizontal(&tdoc, base)),
            (entropy::seq_vertical(&doc, base), entropy::seq_horizontal(&tdoc, base)),
        ];
        for (v, h) in pairs {
            prop_assert!(common::rel_close(v.document_total, h.document_total, 1e-12));
            prop_assert_eq!(v.per_line.len(), img.width());
        }
    }
}
