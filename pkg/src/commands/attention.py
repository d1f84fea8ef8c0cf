import autodiff as ad
import corpus
from commands.base import CommandBase
from decorators import validate
from export import export_attention
from models import load_checkpoint
from validators import ExportValidator


class ExportAttentionCommand(CommandBase):
    name = 'export-attention'
    help = 'write an html heatmap and a tab-separated file of attention and word sentiment per sentence'
    validator = ExportValidator

    @validate(ExportValidator)
    def run(self):
        ad.set_precision(self.data['precision'])
        network, vocabulary, _, _ = load_checkpoint(self.data['checkpoint'])
        examples = corpus.filter_conflicts(corpus.read_corpus(self.data['corpus']))
        with self.staging(self.data['output_dir']) as stage:
            paths = export_attention(network, examples, vocabulary, stage, self.data['batch_size'])
        self.write('{} files written to {}'.format(len(paths), self.data['output_dir']))
