#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: plots.py
Description: static SVG plots of sweep results
"""

import os

import matplotlib as mpl
mpl.use('Agg')

import matplotlib.pyplot as pl  # noqa: E402
import numpy as np  # noqa: E402
import seaborn as sns  # noqa: E402

# fixed element ids, so identical data gives identical SVG files
mpl.rcParams['svg.hashsalt'] = 'pointer_decoherence'


def lab_palette():
    colours = ['mediumblue', 'red', 'orange', 'lightseagreen', 'hotpink', 'black']
    palette = color_names_to_palette(colours)
    sns.set_palette(palette)
    return palette


def color_names_to_palette(colours):
    hex_cols = [mpl.colors.cnames[c] for c in colours]
    palette = [mpl.colors.hex2color(c) for c in hex_cols]

    return palette


def _new_figure(figsize=(6, 4.5)):
    sns.set_style('whitegrid')
    lab_palette()
    return pl.subplots(figsize=figsize)


def save_figure(path, fig=None):
    if fig is None:
        fig = pl.gcf()

    dir_path = os.path.dirname(path)
    if dir_path:
        os.makedirs(dir_path, exist_ok=True)
    fig.savefig(path, format='svg', metadata={'Date': None})
    print('Figure saved to ' + os.path.abspath(path))

    pl.close(fig)


def plot_decoherence_scaling(summary, slope=None):
    """Log-log mean decoherence error against M, with the fitted power law.

    :summary: dataframe with M, mean_error, std_error columns
    """
    fig, ax = _new_figure()
    M = summary['M'].values.astype(float)
    mean = summary['mean_error'].values

    ax.errorbar(M, mean, yerr=summary['std_error'].values, fmt='o', capsize=3, label='mean error')
    if slope is not None and np.isfinite(slope):
        intercept = np.mean(np.log10(mean) - slope * np.log10(M))
        M_fit = np.logspace(np.log10(M.min()), np.log10(M.max()), 50)
        ax.plot(M_fit, 10 ** intercept * M_fit ** slope, '--', label='fit, slope %.3f' % slope)

    ax.set_xscale('log')
    if np.all(mean > 0):
        ax.set_yscale('log')
    ax.set_xlabel('microstates per branch, M')
    ax.set_ylabel(r"$|\mathrm{tr}(\rho A) - \mathrm{tr}(\rho' A)|$")
    ax.legend()
    fig.tight_layout()

    return fig


def plot_recurrence_trace(trace, threshold=None):
    """Trace distance to the t = 0 state, one line per M.

    :trace: dataframe with M, t, distance columns
    """
    fig, ax = _new_figure(figsize=(8, 4.5))
    for M, group in trace.groupby('M', sort=True):
        ax.plot(group['t'].values, group['distance'].values, lw=0.8, label='M = %d' % M)
    if threshold is not None:
        ax.axhline(threshold, color='grey', ls=':', label='threshold')

    ax.set_xlabel('t')
    ax.set_ylabel(r'$D(\rho(t), \rho(0))$')
    ax.set_ylim(0, 1.02)
    ax.legend(loc='upper right')
    fig.tight_layout()

    return fig


def plot_gap(results):
    """Accessible information against mutual entropy, with the I = S line."""
    fig, ax = _new_figure()
    S = results['S_bits'].values
    I = results['I_bits'].values
    failed = results['status'].values != 'ok'

    top = max(1.0, S.max() if S.size else 1.0, I.max() if I.size else 1.0)
    ax.plot([0, top], [0, top], color='grey', ls='--', lw=1, label='I = S')
    ax.scatter(S[~failed], I[~failed], s=10, alpha=0.6, label='states')
    if failed.any():
        ax.scatter(S[failed], I[failed], s=20, marker='x', color='red', label='I > S')

    ax.set_xlabel('S(A:C) [bits]')
    ax.set_ylabel('I(A:C) [bits]')
    ax.legend(loc='upper left')
    fig.tight_layout()

    return fig
