import numpy as np
import pytest

from actrec.model_io import (ModelFile, ModelFormatError, dumps, load_model,
                             loads, save_model)
from actrec.segmentation import BackgroundModel
from actrec.subspace import ClipData, TrainingSet, train


def random_model_file(rng, n=24):
    clips = [ClipData("A", act, f"A/{act}", rng.normal(size=(rng.integers(3, 7), n)))
             for act in ("walk", "fall", "bend")]
    ts = TrainingSet.from_clips(clips)
    model = train(ts, d=4)
    h, w = 6, 8
    background = BackgroundModel(reference=rng.normal(size=(h, w)),
                                 scale=np.abs(rng.normal(size=(h, w))) + 2.0)
    return ModelFile(model=model, background=background, crop_height=h,
                     crop_width=w, k=3.0, fps=10.0, train_actors=["A"],
                     config={"d": "4", "samples": str(ts.l)})


class TestRoundTrip:
    def test_numeric_fields_exact(self, rng):
        mf = random_model_file(rng)
        back = loads(dumps(mf))
        assert np.array_equal(back.model.mean, mf.model.mean)
        assert np.array_equal(back.model.basis, mf.model.basis)
        assert np.array_equal(back.model.eigenvalues, mf.model.eigenvalues)
        assert np.array_equal(back.background.reference, mf.background.reference)
        assert np.array_equal(back.background.scale, mf.background.scale)
        for a, b in zip(back.model.gallery, mf.model.gallery):
            assert np.array_equal(a.frames, b.frames)
            assert a.label == b.label and a.source_id == b.source_id

    def test_metadata_preserved(self, rng):
        mf = random_model_file(rng)
        back = loads(dumps(mf))
        assert back.model.class_names == mf.model.class_names
        assert back.train_actors == mf.train_actors
        assert back.config == mf.config
        assert (back.crop_height, back.crop_width) == (mf.crop_height, mf.crop_width)
        assert (back.k, back.fps) == (mf.k, mf.fps)

    def test_save_load_save_byte_identical(self, rng, tmp_path):
        mf = random_model_file(rng)
        path = tmp_path / "model.bin"
        save_model(mf, path)
        first = path.read_bytes()
        save_model(load_model(path), path)
        assert path.read_bytes() == first


class TestErrors:
    def test_bad_magic(self):
        with pytest.raises(ModelFormatError, match="magic"):
            loads(b"NOTAMODL" + bytes(64))

    def test_truncated(self, rng):
        data = dumps(random_model_file(rng))
        with pytest.raises(ModelFormatError, match="truncated"):
            loads(data[: len(data) // 2])

    def test_bad_version(self, rng):
        data = bytearray(dumps(random_model_file(rng)))
        data[8:12] = (99).to_bytes(4, "little")
        with pytest.raises(ModelFormatError, match="version"):
            loads(bytes(data))
