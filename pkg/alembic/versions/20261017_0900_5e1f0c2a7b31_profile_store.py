"""profile store

Revision ID: 5e1f0c2a7b31
Revises:
Create Date: 2026-10-17 09:00:00.000000

"""
from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision = '5e1f0c2a7b31'
down_revision = None
branch_labels = None
depends_on = None


def upgrade() -> None:
    op.create_table(
        'profile_runs',
        sa.Column('run_id', sa.Integer(), autoincrement=True, nullable=False),
        sa.Column('program', sa.String(length=80), nullable=False),
        sa.Column('generator', sa.String(length=40), nullable=False),
        sa.Column('model', sa.String(length=24), nullable=True),
        sa.Column('a', sa.Float(), nullable=True),
        sa.Column('b', sa.Float(), nullable=True),
        sa.Column('residual', sa.Float(), nullable=True),
        sa.Column('residuals', sa.JSON(), nullable=True),
        sa.Column('created_at', sa.DateTime(timezone=True), server_default=sa.text('CURRENT_TIMESTAMP'), nullable=False),
        sa.Column('updated_at', sa.DateTime(timezone=True), server_default=sa.text('CURRENT_TIMESTAMP'), nullable=False),
        sa.PrimaryKeyConstraint('run_id'),
    )
    op.create_index('ix_profile_runs_program', 'profile_runs', ['program'], unique=False)
    op.create_table(
        'profile_samples',
        sa.Column('sample_id', sa.Integer(), autoincrement=True, nullable=False),
        sa.Column('run_id', sa.Integer(), nullable=False),
        sa.Column('n', sa.Integer(), nullable=False),
        sa.Column('steps_med', sa.Float(), nullable=False),
        sa.Column('steps_min', sa.Integer(), nullable=False),
        sa.Column('steps_max', sa.Integer(), nullable=False),
        sa.Column('weak_med', sa.Float(), nullable=True),
        sa.Column('strong_med', sa.Float(), nullable=True),
        sa.ForeignKeyConstraint(['run_id'], ['profile_runs.run_id'], ondelete='CASCADE'),
        sa.PrimaryKeyConstraint('sample_id'),
        sa.UniqueConstraint('run_id', 'n', name='uq_profile_samples_run_n'),
    )


def downgrade() -> None:
    op.drop_table('profile_samples')
    op.drop_index('ix_profile_runs_program', table_name='profile_runs')
    op.drop_table('profile_runs')
