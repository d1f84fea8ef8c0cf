import os

import evaluation
from commands.base import CommandBase
from decorators import validate
from experiment import Experiment
from loggers import getLogger
from serializers import ReportSerializer, ReportTableSerializer, SweepRowSerializer, send_data
from validators import ExperimentValidator, SweepValidator


logger = getLogger(__name__)


def write_report(directory, report, name='report'):
    with open(os.path.join(directory, name + '.json'), 'w', encoding='utf-8') as f:
        send_data(f, report, ReportSerializer)
    with open(os.path.join(directory, name + '.txt'), 'w', encoding='utf-8') as f:
        f.write('\n'.join(ReportTableSerializer(report).calc()))
        f.write('\n')


class TrainCommand(CommandBase):
    name = 'train'
    help = 'train one model per seed; writes checkpoints, logs and the resolved config'
    validator = ExperimentValidator

    @validate(ExperimentValidator)
    def run(self):
        experiment = Experiment(self.data).load()
        with self.staging(self.data['output_dir']) as stage:
            self.echo_config(stage)
            reports = []
            for seed in experiment.train_config.seeds:
                network, result = experiment.run_seed(seed, stage)
                self.write('seed {}: best dev score {:.4f} at epoch {}'.format(seed, result.score, result.epoch))
                if experiment.test_examples:
                    reports.append(experiment.evaluate(network)[0])
            if reports:
                report = evaluation.aggregate_runs(reports)
                write_report(stage, report)
                for line in ReportTableSerializer(report).calc():
                    self.write(line)


class SweepCommand(CommandBase):
    name = 'sweep'
    help = 'compare variants and Bi-LSTM depths by mean and std accuracy over seeds'
    validator = SweepValidator

    @validate(SweepValidator)
    def run(self):
        experiment = Experiment(self.data).load()
        examples = experiment.test_examples or experiment.dev_examples
        rows = []
        with self.staging(self.data['output_dir']) as stage:
            self.echo_config(stage)
            for variant in self.data['sweep_variants']:
                for layers in self.data['sweep_layers']:
                    cell = os.path.join(stage, '{}-L{}'.format(variant, layers))
                    os.makedirs(cell)
                    reports = []
                    for seed in experiment.train_config.seeds:
                        network, _ = experiment.run_seed(seed, cell, variant=variant, layers=layers)
                        reports.append(experiment.evaluate(network, examples)[0])
                    report = evaluation.aggregate_runs(reports)
                    write_report(cell, report)
                    mean, std = report.metrics['acsa_accuracy']
                    row = {'variant': variant, 'layers': layers, 'mean': mean, 'std': std}
                    rows.append(row)
                    self.write(SweepRowSerializer(row).calc())
            with open(os.path.join(stage, 'sweep.jsonl'), 'w', encoding='utf-8') as f:
                for row in rows:
                    send_data(f, row)
