"""Rebuild the shipped fixtures: python tests/fixtures/regenerate.py"""

from pathlib import Path

from enose_fis import modelfile
from enose_fis.data import generate_session, write_csv
from enose_fis.pipeline import TrainConfig, split_train_test, train

HERE = Path(__file__).parent

if __name__ == "__main__":
    dataset = generate_session()
    write_csv(dataset, HERE / "dataset_seed1.csv")
    config = TrainConfig()
    result = train(split_train_test(dataset)[0], config)
    modelfile.save(HERE / "model_m10_seed1.txt", result.model, dataset.labels, config)
