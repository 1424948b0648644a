import json

import pytest

from pairtrainer.data import PairFileError
from pairtrainer.training import TrainConfig, evaluate, load_checkpoint, train

from trainer_helpers import write_split


class TestTrainConfig:
    def test_protocol_defaults(self):
        config = TrainConfig()
        assert config.num_train_epochs == 10
        assert config.train_batch_size == 16
        assert config.eval_batch_size == 64
        assert config.initial_lr == 5e-5
        assert (config.beta1, config.beta2) == (0.9, 0.999)
        assert config.epsilon == 1e-8
        assert config.weight_decay == 0.01
        assert config.mixed_precision is True
        assert config.seed == 42
        assert config.save_total_limit == 5
        assert config.logging_steps == 10

    def test_warmup_matches_formula(self):
        config = TrainConfig()
        assert config.warmup_steps(320) == (320 * 10) // (2 * 16)

    def test_validation(self):
        with pytest.raises(ValueError):
            TrainConfig(num_train_epochs=0)


@pytest.fixture(scope="module")
def sanity_run(tmp_path_factory):
    """One full 10-epoch run on the 400-pair separable dataset."""
    tmp_path = tmp_path_factory.mktemp("sanity")
    train_path, val_path = write_split(tmp_path, n=400, seed=42)
    result = train(train_path, val_path, TrainConfig(), tmp_path / "run")
    return tmp_path, result


class TestTrainingSanity:
    def test_reaches_f1_on_separable_data(self, sanity_run):
        _, result = sanity_run
        assert len(result.epochs) == 10
        assert max(result.f1_sequence) >= 0.9

    def test_best_checkpoint_is_argmax_of_f1(self, sanity_run):
        _, result = sanity_run
        best_f1 = max(result.f1_sequence)
        assert result.best.f1 == best_f1
        assert result.epochs[result.best.epoch - 1].f1 == best_f1

    def test_reloaded_best_reproduces_validation_f1(self, sanity_run):
        tmp_path, result = sanity_run
        model, vocab, config = load_checkpoint(result.best.path)
        from pairtrainer.data import read_pair_file

        val = read_pair_file(tmp_path / "val.jsonl")
        scores = evaluate(model, vocab, val, config)
        assert scores["f1"] == pytest.approx(result.best.f1, abs=1e-12)

    def test_trainlog_schedule_shape(self, sanity_run):
        _, result = sanity_run
        log = json.loads(result.log_path.read_text())
        # 320 train examples, batch 16, 10 epochs: peak halfway through.
        assert log["warmup_steps"] == 100
        assert log["total_steps"] == 200
        samples = {s["step"]: s["lr"] for s in log["lr_samples"]}
        assert samples[log["warmup_steps"]] == 5e-5
        assert samples[log["total_steps"]] == pytest.approx(log["floor_lr"], rel=1e-9)
        mid_warmup = samples[50]
        expected = log["floor_lr"] + (5e-5 - log["floor_lr"]) * 0.5
        assert mid_warmup == pytest.approx(expected, rel=1e-9)

    def test_trainlog_epoch_metrics_complete(self, sanity_run):
        _, result = sanity_run
        log = json.loads(result.log_path.read_text())
        assert len(log["epochs"]) == 10
        for entry in log["epochs"]:
            assert set(entry) == {"epoch", "accuracy", "precision", "recall", "f1"}
        assert log["best_epoch"] == result.best.epoch

    def test_checkpoint_retention_capped(self, sanity_run):
        tmp_path, result = sanity_run
        retained = list((tmp_path / "run" / "checkpoints").glob("epoch_*.pt"))
        assert len(retained) <= 5
        assert result.best.path in retained


class TestDeterminism:
    def test_fixed_seed_reproduces_f1_sequence(self, tmp_path):
        train_path, val_path = write_split(tmp_path, n=80, seed=7)
        config = TrainConfig(num_train_epochs=2, seed=123)
        a = train(train_path, val_path, config, tmp_path / "run_a")
        b = train(train_path, val_path, config, tmp_path / "run_b")
        assert a.f1_sequence == b.f1_sequence

    def test_different_seed_changes_course(self, tmp_path):
        train_path, val_path = write_split(tmp_path, n=80, seed=7)
        a = train(train_path, val_path, TrainConfig(num_train_epochs=2, seed=1), tmp_path / "a")
        b = train(train_path, val_path, TrainConfig(num_train_epochs=2, seed=2), tmp_path / "b")
        # Weight init and shuffling differ; logged curves should too.
        log_a = json.loads(a.log_path.read_text())["epochs"]
        log_b = json.loads(b.log_path.read_text())["epochs"]
        assert log_a != log_b


class TestTrainingErrors:
    def test_malformed_train_file(self, tmp_path):
        bad = tmp_path / "train.jsonl"
        bad.write_text('{"pair_id": "a", "text": "no markers", "label": 0}\n')
        val = tmp_path / "val.jsonl"
        val.write_text('{"pair_id": "b", "text": "[CLS] x [SEP] y [SEP]", "label": 1}\n')
        with pytest.raises(PairFileError, match="line 1"):
            train(bad, val, TrainConfig(num_train_epochs=1), tmp_path / "run")

    def test_empty_files_rejected(self, tmp_path):
        empty = tmp_path / "train.jsonl"
        empty.write_text("")
        val = tmp_path / "val.jsonl"
        val.write_text('{"pair_id": "b", "text": "[CLS] x [SEP] y [SEP]", "label": 1}\n')
        with pytest.raises(ValueError):
            train(empty, val, TrainConfig(num_train_epochs=1), tmp_path / "run")
