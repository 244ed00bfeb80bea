# kem/tests.py
import hashlib
import random
import statistics
import tempfile
from pathlib import Path

from django.conf import settings
from django.test import SimpleTestCase, override_settings

from pqcpslab.exceptions import InputError

from .bench import INJECTED_TIMINGS, BenchMode, KemOp, batch_median, bench_op, bench_table, cycles_for
from .kat import KatOp, discover_kat_files, load_kat_file
from .mlkem import Ciphertext, SharedSecret, coerce_ciphertext, decaps, encaps, keygen
from .params import KemVariant, coerce_variant, params_for, security_category
from .serializers import KemParamsSerializer, OpTimingSerializer

EXPECTED_SIZES = {
    KemVariant.KYBER512: (800, 1632, 768),
    KemVariant.KYBER768: (1184, 2400, 1088),
    KemVariant.KYBER1024: (1568, 3168, 1568),
}


def _rng_bytes(rng, n):
    return bytes(rng.getrandbits(8) for _ in range(n))


# ==================== PARAMETERS ====================

class ParamsTests(SimpleTestCase):

    def test_kyber512_record(self):
        p = params_for(KemVariant.KYBER512)
        self.assertEqual((p.n, p.k, p.q, p.eta1, p.eta2, p.du, p.dv), (256, 2, 3329, 3, 2, 10, 4))
        self.assertEqual(p.delta_log2, -139)
        self.assertEqual((p.pk_len, p.sk_len, p.ct_len, p.ss_len), (800, 1632, 768, 32))
        self.assertEqual(p.security.nist_level, 1)

    def test_kyber768_record(self):
        p = params_for('kyber768')
        self.assertEqual((p.k, p.eta1, p.eta2, p.du, p.dv, p.delta_log2), (3, 2, 2, 10, 4, -164))
        self.assertEqual(p.security.nist_level, 3)

    def test_kyber1024_record(self):
        p = params_for('Kyber-1024')
        self.assertEqual((p.k, p.eta1, p.eta2, p.du, p.dv, p.delta_log2), (4, 2, 2, 11, 5, -174))
        self.assertEqual(p.security.nist_level, 5)
        self.assertEqual(p.security.core_svp_quantum_bits, 232)

    def test_security_profile_strictly_increases(self):
        profiles = [params_for(v).security for v in KemVariant.values]
        for name in ('nist_level', 'core_svp_classical_bits', 'core_svp_quantum_bits',
                     'gate_count_log2', 'memory_log2'):
            values = [getattr(p, name) for p in profiles]
            self.assertEqual(values, sorted(set(values)), name)

    def test_variant_aliases(self):
        self.assertEqual(coerce_variant('ML-KEM-768'), KemVariant.KYBER768)
        self.assertEqual(coerce_variant('KYBER_512'), KemVariant.KYBER512)
        with self.assertRaises(InputError):
            coerce_variant('kyber2048')

    def test_security_category_table(self):
        self.assertIn('AES-128', security_category(1).description)
        self.assertIn('AES-256', security_category(5).description)
        with self.assertRaises(InputError):
            security_category(6)


# ==================== KEY GENERATION ====================

class KeygenTests(SimpleTestCase):

    def test_sizes_match_parameter_table(self):
        rng = random.Random(1)
        for variant, (pk_len, sk_len, ct_len) in EXPECTED_SIZES.items():
            pair = keygen(variant, _rng_bytes(rng, 64))
            ct, ss = encaps(pair.public_key, variant, _rng_bytes(rng, 32))
            self.assertEqual(len(pair.public_key), pk_len)
            self.assertEqual(len(pair.secret_key), sk_len)
            self.assertEqual(len(ct), ct_len)
            self.assertEqual(len(ss), 32)

    def test_deterministic_in_seed(self):
        seed = bytes(range(64))
        self.assertEqual(keygen('kyber768', seed), keygen('kyber768', seed))

    def test_distinct_seeds_give_distinct_keys(self):
        rng = random.Random(2)
        keys = {keygen('kyber512', _rng_bytes(rng, 64)).public_key for _ in range(100)}
        self.assertEqual(len(keys), 100)

    def test_wrong_seed_length(self):
        with self.assertRaises(InputError):
            keygen('kyber512', bytes(32))

    def test_secret_key_not_in_repr(self):
        pair = keygen('kyber512', bytes(64))
        self.assertNotIn(pair.secret_key.hex()[:32], repr(pair))


# ==================== ENCAPSULATION / DECAPSULATION ====================

class EncapsDecapsTests(SimpleTestCase):

    def test_round_trip_agreement(self):
        trials = getattr(settings, 'PQCPSLAB_ROUNDTRIP_TRIALS', 25)
        rng = random.Random(3)
        for variant in KemVariant.values:
            for _ in range(trials):
                pair = keygen(variant, _rng_bytes(rng, 64))
                ct, ss = encaps(pair.public_key, variant, _rng_bytes(rng, 32))
                self.assertEqual(decaps(pair.secret_key, ct), ss)

    def test_encaps_deterministic(self):
        pair = keygen('kyber1024', bytes(64))
        seed = b'\x07' * 32
        first = encaps(pair.public_key, 'kyber1024', seed)
        second = encaps(pair.public_key, 'kyber1024', seed)
        self.assertEqual(first[0], second[0])
        self.assertEqual(first[1], second[1])

    def test_tampered_ciphertext_uses_implicit_rejection(self):
        rng = random.Random(4)
        positions = max(100, getattr(settings, 'PQCPSLAB_ROUNDTRIP_TRIALS', 25))
        for variant in KemVariant.values:
            pair = keygen(variant, _rng_bytes(rng, 64))
            ct, ss = encaps(pair.public_key, variant, _rng_bytes(rng, 32))
            z = pair.secret_key[-32:]
            for _ in range(positions // 10):
                data = bytearray(ct.data)
                index = rng.randrange(len(data))
                data[index] ^= 1 << rng.randrange(8)
                tampered = Ciphertext(bytes(data), variant)
                recovered = decaps(pair.secret_key, tampered)
                self.assertNotEqual(recovered, ss)
                self.assertEqual(recovered, hashlib.shake_256(z + tampered.data).digest(32))

    def test_every_flip_position_diverges(self):
        rng = random.Random(5)
        pair = keygen('kyber512', _rng_bytes(rng, 64))
        ct, ss = encaps(pair.public_key, 'kyber512', _rng_bytes(rng, 32))
        for index in rng.sample(range(len(ct)), 100):
            data = bytearray(ct.data)
            data[index] ^= 0xFF
            self.assertNotEqual(decaps(pair.secret_key, Ciphertext(bytes(data), 'kyber512')), ss)

    def test_wrong_lengths_raise(self):
        pair = keygen('kyber512', bytes(64))
        with self.assertRaises(InputError):
            encaps(pair.public_key[:-1], 'kyber512', bytes(32))
        with self.assertRaises(InputError):
            encaps(pair.public_key, 'kyber512', bytes(31))
        with self.assertRaises(InputError):
            Ciphertext(bytes(767), 'kyber512')
        ct, _ss = encaps(pair.public_key, 'kyber512', bytes(32))
        with self.assertRaises(InputError):
            decaps(pair.secret_key[:-1], ct)
        with self.assertRaises(InputError):
            decaps(pair.secret_key, ct.data)

    def test_unreduced_public_key_rejected(self):
        pk = bytearray(keygen('kyber512', bytes(64)).public_key)
        # first coefficient becomes 4095
        pk[0] = 0xFF
        pk[1] |= 0x0F
        with self.assertRaises(InputError):
            encaps(bytes(pk), 'kyber512', bytes(32))

    def test_secret_key_hash_check(self):
        pair = keygen('kyber512', bytes(64))
        ct, _ss = encaps(pair.public_key, 'kyber512', bytes(32))
        sk = bytearray(pair.secret_key)
        sk[768 + 5] ^= 0x01
        with self.assertRaises(InputError):
            decaps(bytes(sk), ct)


class SharedSecretTests(SimpleTestCase):

    def test_repr_is_redacted(self):
        secret = SharedSecret(b'\xab' * 32)
        self.assertNotIn('ab', repr(secret).lower().replace('<redacted>', ''))

    def test_wipe_zeroizes(self):
        secret = SharedSecret(b'\x11' * 32)
        secret.wipe()
        self.assertEqual(bytes(secret), bytes(32))

    def test_length_enforced(self):
        with self.assertRaises(InputError):
            SharedSecret(bytes(16))


# ==================== BENCHMARK ====================

class BenchTests(SimpleTestCase):

    def test_injected_values_exact(self):
        expected = {
            'kyber512': (44, 53, 65),
            'kyber768': (75, 89, 101),
            'kyber1024': (107, 121, 147),
        }
        for variant, times in expected.items():
            for op, time_us in zip(KemOp.values, times):
                timing = bench_op(variant, op, 10, BenchMode.INJECTED)
                self.assertEqual(timing.mean_us, time_us)
                self.assertEqual(timing.min_us, timing.max_us)
                self.assertEqual(timing.median_us, time_us)

    def test_injected_cycle_estimate(self):
        timing = bench_op('kyber512', 'keygen', 1, 'injected')
        self.assertEqual(timing.cycle_estimate, 155365)
        # recorded cycles agree with the rounded time at 0.29 ns per cycle
        self.assertAlmostEqual(timing.cycle_estimate * 0.29e-3, timing.mean_us, delta=1.1)

    def test_injected_ordering(self):
        for variant in KemVariant.values:
            times = [INJECTED_TIMINGS[variant][op][1] for op in KemOp.values]
            self.assertEqual(times, sorted(set(times)))
        for op in KemOp.values:
            times = [INJECTED_TIMINGS[variant][op][1] for variant in KemVariant.values]
            self.assertEqual(times, sorted(set(times)))

    def test_single_measured_sample(self):
        timing = bench_op('kyber512', 'encaps', 1, 'measured')
        self.assertEqual(timing.samples, 1)
        self.assertEqual(timing.min_us, timing.max_us)
        self.assertEqual(timing.mean_us, timing.min_us)
        self.assertGreater(timing.mean_us, 0)

    def test_measured_median_ordering(self):
        iterations = getattr(settings, 'PQCPSLAB_TIMING_ITERATIONS', 60)
        medians = {
            (variant, op): bench_op(variant, op, iterations).median_us
            for variant in KemVariant.values for op in KemOp.values
        }
        for variant in KemVariant.values:
            with self.subTest(variant=variant):
                ops = [medians[(variant, op)] for op in KemOp.values]
                self.assertEqual(ops, sorted(ops))
                self.assertEqual(len(set(ops)), 3)
        for op in KemOp.values:
            with self.subTest(op=op):
                sizes = [medians[(variant, op)] for variant in KemVariant.values]
                self.assertEqual(sizes, sorted(sizes))
                self.assertEqual(len(set(sizes)), 3)

    def test_batch_median_takes_quietest_batch(self):
        samples = [9.0, 10.0, 11.0, 4.0, 5.0, 6.0, 50.0, 60.0, 70.0]
        self.assertEqual(batch_median(samples, 3), 5.0)
        self.assertEqual(batch_median(samples, 1), 10.0)
        # more batches than samples falls back to one sample per batch
        self.assertEqual(batch_median([3.0, 2.0], 5), 2.0)

    def test_injected_samples_follow_iterations(self):
        timing = bench_op('kyber768', 'encaps', 12, BenchMode.INJECTED)
        self.assertEqual((timing.samples, timing.mean_us), (12, 89.0))

    @override_settings(PQCPSLAB_CYCLE_PERIOD_NS=1.0)
    def test_cycle_period_setting(self):
        self.assertEqual(cycles_for(2.5), 2500)
        measured = bench_op('kyber512', 'keygen', 1, BenchMode.MEASURED)
        self.assertEqual(measured.cycle_estimate, round(measured.mean_us * 1000))
        # recorded cycle counts do not depend on the configured period
        self.assertEqual(bench_op('kyber512', 'keygen', 1, BenchMode.INJECTED).cycle_estimate, 155365)

    def test_invalid_arguments(self):
        with self.assertRaises(InputError):
            bench_op('kyber512', 'keygen', 0)
        with self.assertRaises(InputError):
            bench_op('kyber512', 'sign', 1)
        with self.assertRaises(InputError):
            bench_op('kyber512', 'keygen', 1, 'estimated')

    def test_table_order(self):
        rows = bench_table(mode='injected')
        self.assertEqual(len(rows), 9)
        self.assertEqual([(r.variant, r.op) for r in rows[:3]],
                         [('kyber512', 'keygen'), ('kyber512', 'encaps'), ('kyber512', 'decaps')])

    def test_serializers(self):
        row = OpTimingSerializer(bench_op('kyber768', 'decaps', 1, 'injected')).data
        self.assertEqual(row['scheme'], 'Kyber-768')
        self.assertEqual(row['mean_us'], 101.0)
        data = KemParamsSerializer(params_for('kyber512')).data
        self.assertEqual(data['security']['core_svp_classical_bits'], 118)
        self.assertNotIn('secret_key', data)


# ==================== KNOWN-ANSWER FILES ====================

class KatLoaderTests(SimpleTestCase):

    def _write(self, text):
        handle = tempfile.NamedTemporaryFile('w', suffix='.kat', delete=False, encoding='utf-8')
        with handle:
            handle.write(text)
        self.addCleanup(Path(handle.name).unlink)
        return handle.name

    def test_load_self_generated_record(self):
        seed_keygen, seed_encaps = bytes(range(64)), bytes(range(32))
        pair = keygen('kyber512', seed_keygen)
        ct, ss = encaps(pair.public_key, 'kyber512', seed_encaps)
        line = ','.join(x.hex() for x in (seed_keygen, seed_encaps, pair.public_key, pair.secret_key, ct.data, bytes(ss)))
        path = self._write(f"# generated\n\n{line}\n")
        vectors = load_kat_file(path)
        self.assertEqual(len(vectors), 1)
        self.assertEqual(vectors[0].variant, 'kyber512')
        self.assertEqual(vectors[0].line, 3)
        self.assertEqual(vectors[0].ct, ct.data)

    def test_malformed_line_names_line_number(self):
        path = self._write("# header\nzz 00\n")
        with self.assertRaisesMessage(InputError, 'line 2'):
            load_kat_file(path)

    def test_bad_hex_names_line_number(self):
        path = self._write(' '.join(['zz'] * 6) + '\n')
        with self.assertRaisesMessage(InputError, 'line 1'):
            load_kat_file(path)

    def test_tagged_records(self):
        seed = bytes(range(64))
        pair = keygen('kyber768', seed)
        ct, ss = encaps(pair.public_key, 'kyber768', bytes(32))
        path = self._write(
            f"keygen {seed[:32].hex()} {seed[32:].hex()} {pair.public_key.hex()} {pair.secret_key.hex()}\n"
            f"DECAPS {pair.secret_key.hex()} {ct.data.hex()} {bytes(ss).hex()}\n"
        )
        first, second = load_kat_file(path)
        self.assertEqual((first.op, first.variant, first.seed_keygen), (KatOp.KEYGEN, 'kyber768', seed))
        self.assertEqual((second.op, second.line, second.ss), (KatOp.DECAPS, 2, bytes(ss)))
        self.assertIsNone(second.pk)

    def test_tagged_record_field_count(self):
        path = self._write('encaps 00 11\n')
        with self.assertRaisesMessage(InputError, 'encaps record expects 4 fields'):
            load_kat_file(path)

    def test_unknown_key_length(self):
        path = self._write(f"decaps {'00' * 10} {'00' * 768} {'00' * 32}\n")
        with self.assertRaisesMessage(InputError, 'matches no parameter set'):
            load_kat_file(path)


class KnownAnswerTests(SimpleTestCase):

    def setUp(self):
        self.kat_files = discover_kat_files(settings.PQCPSLAB_KAT_DIR)
        self.assertTrue(self.kat_files, 'no *.kat files under PQCPSLAB_KAT_DIR')
        self.vectors = [(path.name, v) for path in self.kat_files for v in load_kat_file(path)]

    def test_every_variant_and_operation_covered(self):
        covered = {(v.variant, v.op) for _, v in self.vectors}
        for variant in KemVariant.values:
            for op in (KatOp.KEYGEN, KatOp.ENCAPS, KatOp.DECAPS):
                self.assertIn((variant, op), covered)

    def test_vectors_match_bit_exactly(self):
        for name, vector in self.vectors:
            with self.subTest(file=name, line=vector.line, op=vector.op):
                if vector.op in (KatOp.KEYGEN, KatOp.CHAIN):
                    pair = keygen(vector.variant, vector.seed_keygen)
                    self.assertEqual(pair.public_key, vector.pk)
                    self.assertEqual(pair.secret_key, vector.sk)
                if vector.op in (KatOp.ENCAPS, KatOp.CHAIN):
                    ct, ss = encaps(vector.pk, vector.variant, vector.seed_encaps)
                    self.assertEqual(ct.data, vector.ct)
                    self.assertEqual(ss, vector.ss)
                if vector.op in (KatOp.DECAPS, KatOp.CHAIN):
                    ct = coerce_ciphertext(vector.ct, vector.variant)
                    self.assertEqual(decaps(vector.sk, ct), vector.ss)
