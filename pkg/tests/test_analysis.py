import numpy as np
import pytest

from sebv import (
    BitString,
    OutcomeHistogram,
    ProtocolConfig,
    Rng,
    Variant,
    check_uniformity,
    collect_histogram,
    expected_support,
    joint_readout,
)

# the eight n=3 joint readouts (Bob's register then Alice's) worked out by
# hand for key_a=101, key_b=110 (parity 011) and key_a=101, key_b=000
SUPPORT_PARITY_011 = {
    "011000", "010001", "001010", "000011",
    "111100", "110101", "101110", "100111",
}
SUPPORT_PARITY_101 = {
    "101000", "100001", "111010", "110011",
    "001100", "000101", "011110", "010111",
}


def config(key_a="101", key_b="110", seed=0):
    n = len(key_a)
    return ProtocolConfig(
        Variant.FSEBV, n, BitString.from_text(key_a), BitString.from_text(key_b), seed
    )


def test_joint_readout_order():
    assert joint_readout(BitString.from_text("011"), BitString.from_text("000")) == "011000"


class TestExpectedSupport:
    def test_hand_computed_sets(self):
        assert expected_support(
            3, BitString.from_text("101"), BitString.from_text("110")
        ) == SUPPORT_PARITY_011
        assert expected_support(
            3, BitString.from_text("101"), BitString.from_text("000")
        ) == SUPPORT_PARITY_101

    def test_equal_keys_give_the_diagonal(self):
        support = expected_support(2, BitString.from_text("10"), BitString.from_text("10"))
        assert support == {"0000", "0101", "1010", "1111"}

    @pytest.mark.parametrize("n", [1, 2, 4, 6])
    def test_size_is_two_to_the_n(self, n):
        rng = Rng(n)
        support = expected_support(n, BitString.random(n, rng), BitString.random(n, rng))
        assert len(support) == 1 << n


class TestCollectHistogram:
    def test_reference_run_parity_011(self):
        histogram = collect_histogram(config(), 2048, Rng(2026))
        assert histogram.shots == 2048
        assert sum(histogram.counts.values()) == 2048
        assert histogram.observed_support() == SUPPORT_PARITY_011

    def test_reference_run_parity_101(self):
        histogram = collect_histogram(config(key_b="000"), 2048, Rng(2026))
        assert histogram.observed_support() == SUPPORT_PARITY_101

    def test_n1_zero_keys(self):
        histogram = collect_histogram(config(key_a="0", key_b="0"), 100, Rng(5))
        assert histogram.observed_support() == {"00", "11"}

    def test_frequencies_concentrate_at_uniform(self):
        shots = 2048
        histogram = collect_histogram(config(), shots, Rng(2026))
        p = 1 / 8
        bound = 4 * np.sqrt(p * (1 - p) / shots)
        for readout in SUPPORT_PARITY_011:
            assert abs(histogram.frequencies()[readout] - p) <= bound

    def test_shot_guard(self):
        with pytest.raises(ValueError):
            collect_histogram(config(), 0, Rng(0))

    def test_single_shot(self):
        histogram = collect_histogram(config(), 1, Rng(0))
        assert sum(histogram.counts.values()) == 1
        assert len(histogram.observed_support()) == 1


class TestCheckUniformity:
    def test_ideal_histogram_passes(self):
        histogram = collect_histogram(config(), 2048, Rng(2026))
        check = check_uniformity(histogram, SUPPORT_PARITY_011)
        assert check.passed
        assert check.expected_support == frozenset(SUPPORT_PARITY_011)

    def test_out_of_support_readout_fails(self):
        histogram = collect_histogram(config(), 2048, Rng(2026))
        counts = dict(histogram.counts)
        counts["000000"] = counts.pop(max(counts))  # parity-violating readout
        tampered = OutcomeHistogram(3, 2048, counts)
        assert not check_uniformity(tampered, SUPPORT_PARITY_011).passed

    def test_concentrated_mass_fails_chi_square(self):
        readout = next(iter(SUPPORT_PARITY_011))
        concentrated = OutcomeHistogram(3, 2048, {readout: 2048})
        check = check_uniformity(concentrated, SUPPORT_PARITY_011)
        assert not check.passed
        assert check.chi_square > 1000


class TestExports:
    def test_csv_shape_and_stability(self):
        histogram = collect_histogram(config(), 64, Rng(1))
        text = histogram.to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "readout,count,frequency"
        readouts = [line.split(",")[0] for line in lines[1:]]
        assert readouts == sorted(readouts)
        again = collect_histogram(config(), 64, Rng(1)).to_csv()
        assert text == again

    def test_csv_frequencies_are_exact(self):
        histogram = OutcomeHistogram(1, 8, {"00": 6, "11": 2})
        assert histogram.to_csv() == (
            "readout,count,frequency\n00,6,0.75\n11,2,0.25\n"
        )

    def test_json_record_sorted_counts(self):
        histogram = collect_histogram(config(), 64, Rng(1))
        record = histogram.to_record()
        assert list(record) == ["n", "shots", "counts"]
        assert list(record["counts"]) == sorted(record["counts"])
        assert histogram.to_json_line() == collect_histogram(config(), 64, Rng(1)).to_json_line()
